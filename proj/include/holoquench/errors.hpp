#pragma once

#include <stdexcept>
#include <string>

// Error classes beyond std::invalid_argument. Every CLI diagnostic maps to one of these.

namespace holo {

/// Measured-mode conditioning produced a boundary state that is not pure.
class ProtocolError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Linear least squares with a rank-deficient design.
class DegenerateFitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The probe carries no entanglement, so I(A:b)/S(b) is undefined.
class ProbeDecoupledError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string &msg, int line = 0, std::string key = {})
        : std::runtime_error(format(msg, line, key)), line_(line), key_(std::move(key)) {}

    int line() const { return line_; }
    const std::string &key() const { return key_; }

  private:
    static std::string format(const std::string &msg, int line, const std::string &key) {
        std::string out = "config error";
        if(line > 0) out += " at line " + std::to_string(line);
        if(!key.empty()) out += " (key '" + key + "')";
        return out + ": " + msg;
    }
    int         line_;
    std::string key_;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace holo
