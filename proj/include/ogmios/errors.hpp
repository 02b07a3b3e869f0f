// Copyright 2026 The Ogmios Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ogmios {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was called on a document that lacks a required layer.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed input bytes (XML, UTF-8). Positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed XML that does not follow the document schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A resource file (gazetteer, lexicon, terminology, config) is unusable.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& path, std::size_t line,
                const std::string& message)
      : Error(path + (line ? ":" + std::to_string(line) : std::string()) +
              ": " + message),
        path_(path),
        line_(line) {}

  const std::string& path() const { return path_; }
  // 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Wire protocol or coordinator state machine misuse.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Parse links that do not fit the simplification map they are applied to.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ogmios
