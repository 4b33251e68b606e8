#pragma once

#include <stdexcept>
#include <string>

namespace didcont {

//! Malformed or invalid input data / arguments. Maps to CLI exit code 1.
class InputError : public std::runtime_error
{
public:
  explicit InputError(const std::string& what)
    : std::runtime_error(what)
  {}
};

//! Estimation could not be carried out on otherwise valid input (empty
//! kernel cell, group emptied by trimming, ...). Maps to CLI exit code 2.
class EstimationError : public std::runtime_error
{
public:
  explicit EstimationError(const std::string& what)
    : std::runtime_error(what)
  {}
};

} // namespace didcont
