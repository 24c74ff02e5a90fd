#ifndef STEENROD_REPORT_HPP
#define STEENROD_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "steenrod/graded_ring.hpp"
#include "steenrod/paper_verifier.hpp"
#include "steenrod/unstable_action.hpp"

namespace steenrod {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "steenrod-report/1";

struct PeriodicityReport {
    int cap = 0;
    bool minimal_only = false;
    /// Searches in increasing k; with minimal_only, only the deciding one.
    std::vector<PeriodicitySearch> searches;
    std::optional<int> minimal;
    bool incomplete = false;
};

/// With minimal_only, the smallest period and its search; otherwise every
/// k <= cap/2 with H^k nonzero.
PeriodicityReport periodicity_report(const RingBasis& basis, bool minimal_only,
                                     std::size_t enumeration_bound = kEnumerationBound);

/// Envelope shared by all documents: schema, command, status, then the
/// payload fields in their given order.
Json document(const std::string& command, const std::string& status, const Json& payload);

Json to_json(const VerificationReport& r, bool timing = false);
Json to_json(const CoherenceReport& r);
Json to_json(const PeriodicityReport& r, const RingBasis& basis);

std::string to_text(const VerificationReport& r, bool timing = false);
std::string to_text(const CoherenceReport& r);
std::string to_text(const PeriodicityReport& r, const RingBasis& basis);

/// "pass" or "fail".
std::string status_of(bool passed);

} // namespace steenrod

#endif // STEENROD_REPORT_HPP
