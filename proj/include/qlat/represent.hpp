#pragma once

// Representations of one lattice by another, averaged representation numbers
// over a genus or spin genus, and instance checks of the local-global principle.

#include <optional>
#include <string>
#include <vector>

#include "qlat/genus.hpp"
#include "qlat/localrep.hpp"

namespace qlat {

struct Representation {
  IntMatrix t;  ///< n x m with T^T E_L T = E_M
  bool primitive = false;
};

/// All T with T^T E_L T = E_M, sorted row-major; only primitive ones if asked.
std::vector<Representation> representations(const QuadLattice& m, const QuadLattice& l, bool primitive_only,
                                            std::uint64_t cap = default_caps().short_vectors);

struct RepCount {
  Int r;      ///< primitive
  Int r_all;  ///< all
};

RepCount count_representations(const QuadLattice& m, const QuadLattice& l);

/// r(<t>, l) and r_all(<t>, l) for t = 0..tmax from one enumeration.
struct RankOneTable {
  std::vector<Int> r, r_all;
};
RankOneTable rank_one_counts(const QuadLattice& l, std::int64_t tmax);

struct RepReport {
  Int r, r_all;                      ///< on the base class
  std::vector<RepCount> per_class;   ///< in genus class order
  Rat r_gen;
  std::optional<Rat> r_spn;          ///< spin genus of the base class, when blocks are known
  std::vector<Rat> r_spn_blocks;     ///< per spin block
};

RepReport rep_numbers(const QuadLattice& m, const GenusPartition& g);

/// Reports for <t>, t = 1..tmax (index t-1), sharing one enumeration per class.
std::vector<RepReport> rank_one_reports(const GenusPartition& g, std::int64_t tmax);

struct LgpVerdict {
  bool locally_ok = false;
  Int min_m;
  Int det_e_l;
  std::size_t genus_size = 0;
  std::vector<Int> per_class_r;
  bool every_class_represents = false;  ///< locally_ok implies r > 0 on every class
  LocalReport local;
};

LgpVerdict verify_lgp(const QuadLattice& m, const QuadLattice& l);

struct RatioRow {
  std::int64_t t = 0;
  bool skipped = false;
  std::string reason;  ///< why a row was skipped
  Int r;
  Rat r_gen;
  Rat rel_error;  ///< |r / r_gen - 1|
};

std::vector<RatioRow> ratio_experiment(const GenusPartition& g, const std::vector<std::int64_t>& t_values);

}  // namespace qlat
