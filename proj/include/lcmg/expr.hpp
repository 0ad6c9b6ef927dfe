#pragma once

#include <string>

#include "lcmg/ring.hpp"

namespace lcmg {

/// Parses a ring-element expression against a model's named generators.
/// Grammar (documented in the README):
///   expr    := term (('+'|'-') term)*
///   term    := factor ('*' factor)*
///   factor  := primary ('^' integer | '^*')*
///   primary := number | 'i' | generator | '(' expr ')' | '-' factor
/// '^*' is the ring involution; negative powers invert monomials.
/// Examples: "2 - t - t^-1", "(1-t)*(1-t)^*", "i*x - i*x^-1 + 3".
RingElement parse_ring_expression(const std::string& text, const RingContext& ctx);

} // namespace lcmg
