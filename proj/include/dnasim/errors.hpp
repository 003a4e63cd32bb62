#pragma once
// Exception hierarchy shared by every dnasim module.

#include <stdexcept>
#include <string>

namespace dnasim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bit stream length not a multiple of the codec symbol width.
struct FramingError : Error {
    using Error::Error;
};

// Constrained codec cannot place a base without breaking a constraint.
struct EncodingInfeasible : Error {
    EncodingInfeasible(const std::string& what, std::size_t window_begin, std::size_t window_end)
        : Error(what), window_begin(window_begin), window_end(window_end) {}
    std::size_t window_begin;
    std::size_t window_end;
};

// Malformed or unreadable input file (IDX, FASTA, PGM, ...).
struct IngestError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// A simulation stage was handed input it cannot work on (empty pool, ...).
struct StageError : Error {
    using Error::Error;
};

}  // namespace dnasim
