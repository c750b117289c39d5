// JSON persistence for every workbench object: field contexts, matrices,
// tensors, certificates, graphs, programs, formulas, and candidate
// parameters.  Each container is self-describing (the field descriptor is
// embedded), so a file is portable evidence on its own.
//
// Round-trip contract: parse(emit(x)) reproduces x bit-exactly, including
// complex entries (doubles survive the emit/parse cycle unchanged).  Parsers
// validate shape and reject malformed input with std::invalid_argument (via
// the constructors they call); they do NOT verify semantic claims such as a
// certificate's value — that is what the verifier operations are for.
#pragma once

#include <string>

#include "json.hpp"
#include "ptw/abp.hpp"
#include "ptw/candidates.hpp"
#include "ptw/sos.hpp"

namespace ptw {

using json = nlohmann::json;

json field_to_json(const FieldCtx& ctx);
FieldCtx field_from_json(const json& j);

json matrix_to_json(const DenseMatrix& m);
DenseMatrix matrix_from_json(const json& j);

json hyper_to_json(const HyperMatrix& m);
HyperMatrix hyper_from_json(const json& j);

json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const json& j);

json pt_cert_to_json(const PtCertificate& cert);
PtCertificate pt_cert_from_json(const json& j);

json sos_cert_to_json(const SoSCertificate& cert);
SoSCertificate sos_cert_from_json(const json& j);

json graph_to_json(const PathGraph& g);
PathGraph graph_from_json(const json& j);

json abp_to_json(const OrderedABP& abp);
OrderedABP abp_from_json(const json& j);

json formula_to_json(const SmFormula& f);
SmFormula formula_from_json(const json& j);

json exponent_to_json(const ExponentMatrix& t);
ExponentMatrix exponent_from_json(const json& j);

// rational rank values as reported by the path measures
json rel_to_json(const RelValue& v);

json load_json(const std::string& path);             // throws std::runtime_error
void save_json(const std::string& path, const json& j);

}  // namespace ptw
