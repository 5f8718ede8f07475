#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latentbench {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value handed to a constructor breaks a documented invariant.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

class CycleDetected : public Error {
public:
    using Error::Error;
};

class ConfigInvalid : public Error {
public:
    using Error::Error;
};

/// Confounder target cannot be met by order-consistent edge additions.
class Unachievable : public Error {
public:
    Unachievable(std::size_t target, std::size_t attainable)
        : Error("confounder target " + std::to_string(target) + " exceeds attainable maximum " +
                std::to_string(attainable)),
          target_(target),
          attainable_(attainable) {}

    std::size_t target() const { return target_; }
    std::size_t attainable() const { return attainable_; }

private:
    std::size_t target_;
    std::size_t attainable_;
};

class NotEnoughCandidates : public Error {
public:
    NotEnoughCandidates(std::size_t requested, std::size_t pool)
        : Error("requested " + std::to_string(requested) + " hidden vertices but only " +
                std::to_string(pool) + " candidates qualify"),
          pool_(pool) {}

    std::size_t pool_size() const { return pool_; }

private:
    std::size_t pool_;
};

class InvalidRange : public Error {
public:
    using Error::Error;
};

class HiddenNotRoot : public Error {
public:
    explicit HiddenNotRoot(int vertex)
        : Error("hidden vertex " + std::to_string(vertex) +
                " has parents; implicit reformulation needs source confounders"),
          vertex_(vertex) {}

    int vertex() const { return vertex_; }

private:
    int vertex_;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class DegenerateConditioning : public Error {
public:
    using Error::Error;
};

class SingularBlock : public Error {
public:
    using Error::Error;
};

class SingularSolve : public Error {
public:
    using Error::Error;
};

class HypothesisViolated : public Error {
public:
    using Error::Error;
};

class TooLarge : public Error {
public:
    using Error::Error;
};

class VertexMismatch : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    IoError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Pipeline failure tagged with the stage that raised it.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace latentbench
