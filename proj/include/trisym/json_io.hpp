#pragma once

#include "trisym/monad.hpp"
#include "trisym/sections.hpp"

#include <json.hpp>

#include <string>

namespace trisym {

using Json = nlohmann::ordered_json;

// complex numbers serialize as [re, im]; matrices as
// {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major order
Json to_json(const Complex& z);
Json to_json(const CMatrix& m);
Complex complex_from_json(const Json& j);
CMatrix matrix_from_json(const Json& j);

Json to_json(const ADHMData& x);
ADHMData adhm_from_json(const Json& j);

Json to_json(const ADHMSection& s);
ADHMSection section_from_json(const Json& j);

Json to_json(const TriSpan& s);
TriSpan trispan_from_json(const Json& j, const Tolerance& tol);

Json to_json(const MonadData& m);
MonadData monad_from_json(const Json& j);

Json to_json(const MomentValue& m);
Json to_json(const RankProfileReport& r);
Json to_json(const GlobalRegularityReport& r);
Json to_json(const ModuliReport& r);
Json to_json(const ConstancyReport& r);
Json to_json(const ComplexConditionReport& r);
Json to_json(const ExactnessReport& r);
Json to_json(const SplittingReport& r, const LineParam& line);

// write-temp-then-rename; "-" writes to stdout
void write_atomic(const std::string& path, const Json& j, bool pretty);

}  // namespace trisym
