#pragma once

#include <stdexcept>
#include <string>

namespace cospec {

// Every library failure derives from Error so the CLI can report a named class.
class Error : public std::runtime_error {
public:
    Error(std::string cls, const std::string& msg)
        : std::runtime_error(msg), class_name_(std::move(cls)) {}

    const std::string& class_name() const noexcept { return class_name_; }

private:
    std::string class_name_;
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error("DimensionError", msg) {}
};

// An enumeration or exhaustive scan was asked to run past its feasibility limit.
class GuardError : public Error {
public:
    explicit GuardError(const std::string& msg) : Error("GuardError", msg) {}
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& msg) : Error("PreconditionError", msg) {}
};

// A bound that the counting argument guarantees was observed to fail.
class ClaimViolation : public Error {
public:
    explicit ClaimViolation(const std::string& msg) : Error("ClaimViolation", msg) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error("ParseError", msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("IoError", msg) {}
};

} // namespace cospec
