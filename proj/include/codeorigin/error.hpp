#pragma once

#include <stdexcept>
#include <string>

namespace codeorigin {

/// Broad failure classes. They map one-to-one onto the C status codes and the
/// CLI exit codes (input problems exit 2, training problems exit 1).
enum class ErrorKind {
    input,
    training,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& message)
{
    throw Error(ErrorKind::input, message);
}

[[noreturn]] inline void fail_training(const std::string& message)
{
    throw Error(ErrorKind::training, message);
}

} // namespace codeorigin
