#pragma once

#include <string>
#include <vector>

namespace signlp::mdie {

// Argument role in a mode scheme: +type (input), -type (output),
// #type (constant).
struct Placemarker {
  enum class Pol { Input, Output, Constant };
  Pol pol = Pol::Input;
  std::string type;

  bool operator==(const Placemarker&) const = default;
};

inline constexpr long kRecallUnbounded = -1;

// modeh/modeb declaration: recall bound plus an atom schema whose argument
// slots are placemarkers.
struct ModeDecl {
  bool is_head = false;
  long recall = kRecallUnbounded;  // >= 1, or kRecallUnbounded for '*'
  std::string pred;
  std::vector<Placemarker> slots;

  std::size_t arity() const { return slots.size(); }
  bool operator==(const ModeDecl&) const = default;
};

}  // namespace signlp::mdie
