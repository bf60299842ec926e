#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpcgc {

// Base class for all codec errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// PLY parsing failure; carries the byte offset where parsing stopped.
class PlyError : public Error {
public:
  PlyError(const std::string& msg, std::size_t byte_offset)
      : Error(msg + " (byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

private:
  std::size_t byte_offset_;
};

// Malformed or inconsistent coded stream.
class StreamError : public Error {
public:
  enum class Kind { BadMagic, UnsupportedVersion, Truncated, InvalidField, Corrupt };

  StreamError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}

  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

// Stream references a model other than the one supplied to the decoder.
class ModelMismatchError : public Error {
public:
  explicit ModelMismatchError(const std::string& msg) : Error(msg) {}
};

// Codebook / transform training could not proceed.
class TrainingError : public Error {
public:
  explicit TrainingError(const std::string& msg) : Error(msg) {}
};

// Precondition violation on an operation's inputs.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

}  // namespace gpcgc
