#pragma once

#include <string>
#include <string_view>

#include "justnets/net.hpp"

namespace justnets {

/// Parses the line-oriented .pnet format:
///
///     net <name>
///     place <id> [tokens=<n>]
///     trans <id> label=<action>|tau|w
///     arc <src> <dst> [weight=<n>]
///     read <place> <trans> [weight=<n>]
///     actions <a> <b> ...
///
/// '#' starts a comment. Places and transitions must be declared before use.
/// Throws ParseError.
Net parse_pnet(std::string_view text);

/// Writes a net in .pnet format; parse_pnet(write_pnet(n)) reproduces n.
std::string write_pnet(const Net& n);

/// Graphviz rendering: places as circles with their token count, transitions as
/// boxes with their label, read arcs as undirected edges.
std::string to_dot(const Net& n);

}  // namespace justnets
