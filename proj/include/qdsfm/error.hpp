#pragma once

#include <stdexcept>
#include <string>

namespace qdsfm {

// Malformed atoms, instances, parameters or input files.
class InvalidArgument : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Exhaustive routines refuse inputs beyond their enumeration limit.
class CapacityError : public std::length_error
{
public:
    using std::length_error::length_error;
};

}  // namespace qdsfm
