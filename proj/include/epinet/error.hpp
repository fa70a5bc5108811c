#pragma once

#include <stdexcept>
#include <string>

namespace epinet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed graph input: bad index, self-loop, duplicate edge, bad file.
struct GraphError : Error {
  using Error::Error;
};

/// Parameter outside its documented domain.
struct ConfigError : Error {
  using Error::Error;
};

/// Network generation could not satisfy its constraints.
struct GenerationError : Error {
  using Error::Error;
};

/// Simulation contract violation (round cap, double global removal, ...).
struct SimulationError : Error {
  using Error::Error;
};

}  // namespace epinet
