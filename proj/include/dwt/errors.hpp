#pragma once

#include <stdexcept>
#include <string>

namespace dwt {

enum class ErrorKind {
    MFunctionPole,
    NotInSplitPlane,
    ChannelDegenerate,
    DegenerateWronskian,
    CoincidentPoints,
    NonConvergence,
    WrongSide,
    InvalidInterval,
    InvalidArgument,
    Parse,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Parse failures carry the offending 1-based line (0 when not line oriented).
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace dwt
