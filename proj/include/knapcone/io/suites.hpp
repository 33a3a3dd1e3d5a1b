#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knapcone/errors.hpp"

namespace knapcone {

struct SuiteInstance {
  std::string name;
  std::vector<std::int64_t> a;
  std::optional<std::int64_t> frobenius;     // known Frobenius number
  std::optional<std::int64_t> reference_nl;  // reference leaf count
  /// Index (zero-based) whose cone alone is benchmarked; nullopt means all n cones.
  std::optional<std::size_t> single_index;
};

/// Hard knapsack instances with Frobenius numbers and reference leaf counts (all cones).
inline const std::vector<SuiteInstance>& hard_suite() {
  static const std::vector<SuiteInstance> s = {
      {"cuww4", {13211, 13212, 39638, 52844, 66060, 79268, 92482}, 104723595, 1036, {}},
      {"cuww5", {13429, 26850, 26855, 40280, 40281, 53711, 53714, 67141}, 45094583, 5548, {}},
      {"prob1", {25067, 49300, 49717, 62124, 87608, 88025, 113673, 119169}, 33367335, 24786, {}},
      {"prob2", {11948, 23330, 30635, 44197, 92754, 123389, 136951, 140745}, 14215206, 11072, {}},
      {"prob3", {39559, 61679, 79625, 99658, 133404, 137071, 159757, 173977}, 58424799, 11490, {}},
      {"prob4", {48709, 55893, 62177, 65919, 86271, 87692, 102881, 109765}, 60575665, 15438, {}},
      {"prob5", {28637, 48198, 80330, 91980, 102221, 135518, 165564, 176049}, 62442884, 29595, {}},
      {"prob6", {20601, 40429, 40429, 45415, 53725, 61919, 64470, 69340, 78539, 95043}, 22382774, 52916, {}},
      {"prob7", {18902, 26720, 34538, 34868, 49201, 49531, 65167, 66800, 84069, 137179}, 27267751, 43552, {}},
      {"prob8", {17035, 45529, 48317, 48506, 86120, 100178, 112464, 115819, 125128, 129688}, 21733990, 139188, {}},
      {"prob10", {45276, 70778, 86911, 92634, 97839, 125941, 134269, 141033, 147279, 153525}, 106925261, 53766, {}},
      {"prob11", {11615, 27638, 32124, 48384, 53542, 56230, 73104, 73884, 112951, 130204}, 577134, 4455683, {}},
      {"prob12", {14770, 32480, 75923, 86053, 85747, 91772, 101240, 115403, 137390, 147371}, 944183, 6961202, {}},
      {"prob13", {15167, 28569, 36170, 55419, 70945, 74926, 95821, 109046, 121581, 137695}, 765260, 6085420, {}},
      {"prob14", {11828, 14253, 46209, 52042, 55987, 72649, 119704, 129334, 135589, 138360}, 680230, 7026995, {}},
      {"prob15", {13128, 37469, 39391, 41928, 53433, 59283, 81669, 95339, 110593, 131989}, 663281, 5183979, {}},
      {"prob16", {35113, 36869, 46647, 53560, 81518, 85287, 102780, 115459, 146791, 147097}, 1109710, 4921562, {}},
      {"prob17", {14054, 22184, 29952, 64696, 92752, 97364, 118723, 119355, 122370, 140050}, 752109, 6519150, {}},
      {"prob18", {20303, 26239, 33733, 47223, 55486, 93776, 119372, 136158, 136989, 148851}, 783879, 6450759, {}},
      {"prob19", {20212, 30662, 31420, 49259, 49701, 62688, 74254, 77244, 139477, 142101}, 677347, 6041508, {}},
      {"prob20", {32663, 41286, 44549, 45674, 95772, 111887, 117611, 117763, 141840, 149740}, 1037608, 6527133, {}},
  };
  return s;
}

/// Random cones of dimension 9..15; only the cone of the first index is decomposed.
inline const std::vector<SuiteInstance>& random_cone_suite() {
  static const std::vector<SuiteInstance> s = {
      {"rand09a", {1285, 2549, 2209, 2402, 2018, 2789, 1181, 2369, 121}, {}, 10342, 0},
      {"rand09b", {1565, 2594, 2882, 2988, 2876, 544, 1621, 740, 2372}, {}, 11063, 0},
      {"rand10a", {422, 1980, 2478, 1360, 2179, 1992, 2857, 1326, 78, 2421}, {}, 8117, 0},
      {"rand10b", {2937, 600, 2895, 538, 584, 2175, 1636, 2942, 1905, 509}, {}, 40591, 0},
      {"rand11a", {681, 640, 1082, 2115, 2937, 965, 2690, 1572, 701, 596, 224}, {}, 22747, 0},
      {"rand11b", {1576, 2362, 226, 2059, 2078, 2694, 1824, 1320, 1908, 2968, 1547}, {}, 29749, 0},
      {"rand12a", {1439, 799, 2358, 241, 743, 2370, 2188, 1713, 1114, 783, 922, 1124}, {}, 75889, 0},
      {"rand12b", {2934, 1928, 2894, 1687, 2542, 2633, 662, 2545, 1184, 1250, 2357, 1539}, {}, 106726, 0},
      {"rand13a", {951, 1249, 1796, 2396, 1838, 728, 930, 1266, 196, 2353, 701, 1906, 1301}, {}, 56259, 0},
      {"rand13b", {2097, 1020, 2525, 628, 1080, 581, 2709, 1322, 149, 1125, 2309, 1210, 1878}, {}, 291075, 0},
      {"rand14a", {1300, 1340, 2934, 1188, 1696, 1716, 67, 167, 2390, 950, 1218, 1201, 2757, 2584}, {}, 256285, 0},
      {"rand14b", {2800, 631, 608, 2136, 2925, 163, 628, 1387, 1337, 2370, 2226, 2562, 1550, 739}, {}, 833283, 0},
      {"rand15a", {758, 148, 1880, 43, 281, 2169, 528, 243, 1589, 1187, 1145, 290, 268, 2643, 317}, {}, 215849, 0},
      {"rand15b", {2841, 438, 775, 2129, 2919, 1284, 1374, 613, 2917, 674, 1740, 843, 1834, 1314, 924}, {}, 1349790, 0},
  };
  return s;
}

/// builtin:cuww, builtin:prob, builtin:random-table1.
inline std::vector<SuiteInstance> builtin_suite(const std::string& name) {
  std::vector<SuiteInstance> out;
  if (name == "cuww" || name == "prob") {
    for (const auto& s : hard_suite())
      if (s.name.rfind(name, 0) == 0) out.push_back(s);
  } else if (name == "random-table1") {
    out = random_cone_suite();
  } else {
    fail(ErrorCode::InvalidInput, "unknown builtin suite '" + name + "'");
  }
  return out;
}

inline std::optional<SuiteInstance> find_builtin(const std::string& name) {
  for (const auto* suite : {&hard_suite(), &random_cone_suite()})
    for (const auto& s : *suite)
      if (s.name == name) return s;
  return std::nullopt;
}

}  // namespace knapcone
