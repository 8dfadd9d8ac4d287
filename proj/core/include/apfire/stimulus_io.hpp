#pragma once

#include <string>

#include "apfire/stimulus.hpp"

namespace apfire {

/// Parses a stimulus description:
///
///   {"type": "trig", "c0": 1.0,
///    "terms": [{"a": 0.0, "b": 0.5, "lambda": 6.283185307179586}]}
///   {"type": "piecewise", "breakpoints": [0, 0.5, 1], "values": [2, 0],
///    "extension": {"kind": "periodic"}}
///   {"type": "piecewise", ..., "extension": {"kind": "tails",
///    "left": 1.0, "right": 1.0}}
///   {"type": "sum", "parts": [ ... ]}
///
/// Throws ParseError naming the offending field for non-increasing
/// breakpoints, non-positive or duplicate frequencies, and length
/// mismatches.
Stimulus parse_stimulus(const std::string& json_text);

/// parse_stimulus on the contents of a file.
Stimulus load_stimulus(const std::string& path);

/// Canonical JSON form of a stimulus (round-trips through parse_stimulus).
std::string stimulus_to_json(const Stimulus& f);

/// Shortest 17-significant-digit representation; round-trips to the same
/// double. Used for every float in CSV output.
std::string format_g17(double x);

}  // namespace apfire
