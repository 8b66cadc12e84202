#pragma once

// JSON encoding of lattices, matrices, polynomial systems and every report
// type. Integers that do not fit in 64 bits and all rationals are strings.

#include <json.hpp>
#include <string>

#include "qlat/corpus.hpp"
#include "qlat/genus.hpp"
#include "qlat/heights.hpp"
#include "qlat/localrep.hpp"
#include "qlat/padic.hpp"
#include "qlat/represent.hpp"

namespace qlat {

using Json = nlohmann::ordered_json;

/// Input that does not parse against the expected schema.
class FormatError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "format"; }
};

Json read_json_file(const std::string& path);

Json to_json(const Int& x);
Json rat_json(const Rat& q);
Int int_from_json(const Json& j);
Rat rat_from_json(const Json& j);

Json to_json(const IntMatrix& a);
IntMatrix int_matrix_from_json(const Json& j);
Json to_json(const IntVector& v);
IntVector int_vector_from_json(const Json& j);
RatVector rat_vector_from_json(const Json& j);

/// {"n": n, "coeffs": [[m_11..m_1n], [m_22..m_2n], ..., [m_nn]]}
Json to_json(const QuadLattice& l);
QuadLattice lattice_from_json(const Json& j);

/// {"vars": m, "polys": [[[coef, [exps]], ...], ...]}
Json to_json(const PolySystem& f);
PolySystem poly_system_from_json(const Json& j);

Json to_json(const LocalCertificate& c);
Json to_json(const LocalReport& r);
Json to_json(const GenusPartition& g);
Json to_json(const RepReport& r);
Json to_json(const LgpVerdict& v);
Json to_json(const std::vector<RatioRow>& rows);
Json to_json(const HeightReport& h);
Json to_json(const KernelBasis& k);
Json to_json(const LieBasis& l);
Json to_json(const PadicSmith& s);
Json to_json(const GreenbergResult& g);
Json to_json(const KGeneration& k);
Json to_json(const std::vector<CorpusInstance>& corpus);

}  // namespace qlat
