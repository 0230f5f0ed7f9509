// Copyright 2026 The covermap Authors
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

#include <stdexcept>
#include <string>

namespace covermap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File could not be read, written, or decoded.
class IoError : public Error {
public:
    using Error::Error;
};

// Config, registry, or CSV contents violate the documented schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Multi-raster operation on grids that are not co-registered.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

// Arguments outside an operation's stated preconditions.
class ValueError : public Error {
public:
    using Error::Error;
};

} // namespace covermap
