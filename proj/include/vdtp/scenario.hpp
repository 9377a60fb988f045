#pragma once

#include <stdexcept>
#include <string>

#include "vdtp/bench.hpp"

namespace vdtp {

// Scenario file problem: JSON syntax errors carry the 1-based line/column
// of the offending byte; semantic errors (unknown key, bad type or value)
// carry zeros.
class ScenarioError : public std::runtime_error {
  public:
    explicit ScenarioError(const std::string& what, int line = 0, int column = 0)
        : std::runtime_error(what), line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

// Parses a scenario document into an ExperimentSpec. Every key is optional
// and defaults to the standard experiment (six presets, five sizes, 15
// repetitions, low/high regimes); unknown keys are rejected at every level.
// The result is validated before it is returned.
ExperimentSpec parse_scenario(const std::string& json_text);

// The document shape parse_scenario accepts, as a template, with every
// default filled in.
std::string default_scenario_json();

}  // namespace vdtp
