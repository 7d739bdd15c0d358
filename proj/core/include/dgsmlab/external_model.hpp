#pragma once

// Black-box simulators behind a line protocol.
//
// The command is run through /bin/sh in `workdir`, once per batch. It reads
// one CSV row of d decimal values per line on standard input (',' delimiter,
// '.' decimal separator, no header, 17 significant digits) and writes exactly
// one value per line on standard output, in order. A nonzero exit status,
// a malformed line or a row-count mismatch raises EvaluationError carrying
// the captured standard error.

#include <filesystem>
#include <string>

#include "dgsmlab/models.hpp"

namespace dgsmlab {

ModelPtr external_model(std::string command, std::filesystem::path workdir, std::size_t dimension,
                        std::string name = "external");

}  // namespace dgsmlab
