#pragma once

#include <stdexcept>
#include <string>

namespace fano {

/// A fact file or script line failed to parse.
struct ParseError : std::runtime_error {
    ParseError(const std::string& source, int line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
          source(source), line(line) {}
    std::string source;
    int line;
};

/// Two derivations (or an injected fact) disagree on the same cell.
struct Contradiction : std::runtime_error {
    explicit Contradiction(const std::string& what) : std::runtime_error(what) {}
};

/// A derivation needed a cell outside the window it was given.
struct FootprintError : std::runtime_error {
    explicit FootprintError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fano
