#pragma once

#include "checker.hpp"
#include "corpus.hpp"
#include "desugar.hpp"
#include "enumerate.hpp"
#include "invariants.hpp"
#include "parser.hpp"
#include "report.hpp"
#include "validate.hpp"

namespace mominv {

// Parse, desugar branching, validate: the full frontend in one call.
inline ValidatedProgram load_program(const std::string& source) {
    Program p = parse_program(source);
    if (p.has_multipath()) desugar_multipath(p);
    return validate(p);
}

} // namespace mominv
