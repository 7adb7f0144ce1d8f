#pragma once

#include <stdexcept>
#include <string>

namespace sqfd {

/// Base for every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GeometryError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class MeshError : public Error { public: using Error::Error; };
class AssemblyError : public Error { public: using Error::Error; };
class SolveError : public Error { public: using Error::Error; };
class IndexError : public Error { public: using Error::Error; };
class FitError : public Error { public: using Error::Error; };
class PeakError : public Error { public: using Error::Error; };
class BandwidthError : public Error { public: using Error::Error; };

/// Invalid run configuration (bad value, unknown key, violated precondition).
class ConfigError : public Error { public: using Error::Error; };

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace sqfd
