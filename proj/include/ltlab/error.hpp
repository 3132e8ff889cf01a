#pragma once

#include <stdexcept>
#include <string>

namespace ltlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainTooSmall : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class SizeCapExceeded : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ltlab
