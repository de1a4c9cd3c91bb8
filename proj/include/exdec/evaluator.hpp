#pragma once

#include <functional>
#include <memory>

#include "exdec/code.hpp"
#include "exdec/matching_decoder.hpp"
#include "exdec/oracle.hpp"
#include "exdec/unionfind_decoder.hpp"

namespace exdec {

/// Shot-level verdict of a configured decoder.
using Evaluator = std::function<ShotVerdict(const PauliError&)>;

/// Evaluator for `kind` at tolerance c. The decoder is shared by all copies.
inline Evaluator make_evaluator(const Code& code, DecoderKind kind, double c, bool tabulate = true) {
    DecoderConfig cfg{c};
    cfg.validate();
    if (kind == DecoderKind::Mwpm) {
        auto dec = std::make_shared<MatchingDecoder>(code, tabulate);
        return [dec, cfg](const PauliError& e) { return dec->evaluate(e, cfg); };
    }
    auto dec = std::make_shared<UnionFindDecoder>(code, tabulate);
    return [dec, cfg](const PauliError& e) { return dec->evaluate(e, cfg); };
}

}  // namespace exdec
