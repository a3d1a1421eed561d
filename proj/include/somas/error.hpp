#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace somas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown names, malformed model files, out-of-range ids.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Text that does not match a grammar. `position` is a 0-based byte offset.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// No guard of gamma_a(q) is true under the messages a receives at q.
class GuardIncomplete : public Error {
 public:
  GuardIncomplete(std::string agent, std::string state)
      : Error("no guard applies for agent '" + agent + "' in state '" + state + "'"),
        agent_(std::move(agent)),
        state_(std::move(state)) {}
  const std::string& agent() const { return agent_; }
  const std::string& state() const { return state_; }

 private:
  std::string agent_;
  std::string state_;
};

/// A configured enumeration or oracle size bound was exceeded.
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace somas
