#pragma once

#include <string_view>

#include "lpbox/admm.hpp"
#include "lpbox/message_passing.hpp"

namespace lpbox {

enum class DecoderKind { l2box, penalized, bp, minsum, normminsum };

const char* to_string(DecoderKind k);
DecoderKind decoder_kind_from_string(std::string_view name);  // throws on unknown name

/// One value naming any workbench decoder with its parameters; only the block
/// matching `kind` is consulted (the mp variant is implied by the kind).
struct DecoderSpec {
    DecoderKind kind = DecoderKind::l2box;
    L2BoxParams l2box;
    PenalizedParams penalized;
    MpParams mp;
};

DecodeResult decode_with(const DecoderSpec& spec, const ParityCheckMatrix& h,
                         const Eigen::Ref<const Eigen::VectorXd>& gamma);

}  // namespace lpbox
