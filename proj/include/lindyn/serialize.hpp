#pragma once

#include "json.hpp"

#include "lindyn/expansivity.hpp"
#include "lindyn/homoclinic.hpp"
#include "lindyn/hypercyclic.hpp"
#include "lindyn/linf.hpp"
#include "lindyn/stability.hpp"

namespace lindyn {

using Json = nlohmann::ordered_json;

// Parse errors are CONFIG_INVALID with a JSON-path location such as
// "$.operator.factors[1].offset".
Scalar scalar_from_json(const Json& j, const std::string& where);
Json scalar_to_json(Scalar z);

LinOp operator_from_json(const Json& j, const std::string& where = "$.operator",
                         std::optional<NormTag> inherited = std::nullopt);
Json operator_to_json(const LinOp& op);

// Checks the description without building it; building may need a spectral
// computation that can fail at run time.
void check_splitting_json(const Json& j, const std::string& where);
Splitting splitting_from_json(const Json& j, const LinOp& op, const std::string& where = "$.splitting");

// Dense vectors are [[re, im], ...] (plain numbers allowed on input); sequences
// are {"entries": [[k, re, im], ...]}.
DenseVector dense_vector_from_json(const Json& j, NormTag tag, const std::string& where);
SparseBiSeq sequence_from_json(const Json& j, NormTag tag, const std::string& where);
CVector cvector_from_json(const Json& j, const std::string& where);
Json vector_to_json(const CVector& v);
Json vector_to_json(const DenseVector& v);
Json vector_to_json(const SparseBiSeq& v);
Json vector_to_json(const AnyVector& v);

Json to_json(const OperatorReport& r);
Json to_json(const HyperbolicityReport& r);
Json to_json(const ShadBounds& b);
Json to_json(const WitnessResult& w);
Json to_json(const AdjointCertificate& c);
Json to_json(const CarReport& r);
Json to_json(const TrivialHVerdict& v);
Json to_json(const ScanTable& t);
Json to_json(const std::vector<GrowthPoint>& g);
Json to_json(const UniformSearch& u);
template <class V>
Json to_json(const HomoclinicEvidence<V>& ev);

// Finite doubles as numbers, infinities as the strings "inf" / "-inf".
Json number(double x);

}  // namespace lindyn
