#pragma once

#include <stdexcept>
#include <string>

namespace thickflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define THICKFLOW_ERROR(Name)                  \
  class Name : public ::thickflow::Error {     \
   public:                                     \
    using ::thickflow::Error::Error;           \
  }

}  // namespace thickflow
