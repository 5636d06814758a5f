#pragma once

#include <string>

namespace signlp::defaults {

// Metarule set used by the meta-interpretive learner.
inline const char* kMetarules =
    "identify: P(x,y) :- Q(x,y).\n"
    "inverse: P(x,y) :- Q(y,x).\n"
    "precon: P(x,y) :- Q(x), R(x,y).\n"
    "postcon: P(x,y) :- Q(x,y), R(y).\n"
    "chain: P(x,y) :- Q(x,z), R(z,y).\n"
    "recursion: P(x,y) :- Q(x,z), P(z,y).\n";

// Mode declarations for the mode-directed inverse-entailment learner.
inline const char* kModes =
    "modeh(1,traffic_sign(+sign,#class)).\n"
    "modeb(*,color(+sign,#color)).\n"
    "modeb(*,shape(+sign,#shape)).\n"
    "modeb(*,has_word(+sign,-w)).\n"
    "modeb(*,closely_match(+w,#word)).\n"
    "modeb(*,number(+sign,-n)).\n"
    "modeb(*,digits(+n,#int)).\n";

// Words a detected legend token is compared against.
inline const char* kLexicon[] = {"stop", "yield"};

}  // namespace signlp::defaults
