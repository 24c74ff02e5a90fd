#ifndef STEENROD_PAPER_VERIFIER_HPP
#define STEENROD_PAPER_VERIFIER_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "steenrod/graded_ring.hpp"
#include "steenrod/steenrod_core.hpp"
#include "steenrod/unstable_action.hpp"

namespace steenrod {

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

/// Outcome of one verifier run. Everything except `seconds` is a pure
/// function of the parameters.
struct VerificationReport {
    std::string id;
    std::vector<std::pair<std::string, std::variant<long long, std::string>>> params;
    bool passed = true;
    /// The parameter range was empty; `passed` is then true.
    bool vacuous = false;
    /// Set by conditional audits: "contradiction", "inconclusive" or
    /// "hypothesis not met".
    std::string conclusion;
    std::vector<CheckResult> checks;
    /// One line per failed check locating the failure.
    std::vector<std::string> witnesses;
    std::vector<std::string> notes;
    std::optional<double> seconds;

    void param(const std::string& key, const std::string& value) { params.emplace_back(key, value); }
    void param(const std::string& key, long long value) { params.emplace_back(key, value); }
    /// Appends a check; a failure clears `passed` and records the witness.
    void check(const std::string& name, bool ok, const std::string& detail = {},
               const std::string& witness = {});
};

/// Predicate on normalize(left composite). The leading monomial, if given,
/// must occur with the required coefficient (any nonzero one when unset);
/// every other term must be listed in `allowed` or be a two-letter word
/// whose second exponent lies in [min_second, max_second] and whose
/// bocksteins match `trailing_bocksteins`.
struct RelationShapeSpec {
    Prime prime{2};
    int first = 0;
    int second = 0;
    bool middle_bockstein = false;
    std::optional<SteenrodMonomial> leading;
    std::optional<std::uint32_t> leading_coefficient;
    int min_second = 1;
    int max_second = 0;
    std::vector<std::uint8_t> trailing_bocksteins;
    std::vector<SteenrodMonomial> allowed;

    SteenrodMonomial left() const;
    /// Empty on success, otherwise a description of the first offending term.
    std::string violation(const SteenrodElement& normalized) const;
};

/// is_indecomposable(k) agrees with k being a power of two for 1 <= k <= k_max.
VerificationReport verify_power_of_two(int k_max, const Rewriter& rewriter = Rewriter(Prime(2)));

/// Sq^d Sq^{k/2} = Sq^{k/2+d} + sum_{0<j<=d/2} c_j Sq^{k/2+d-j} Sq^j for 0 < d < k/2.
VerificationReport verify_section4_family1(int k, const Rewriter& rewriter = Rewriter(Prime(2)));

/// Sq^{2i} Sq^{k-i} = c_0 Sq^{k+i} + sum_{0<j<i} c_j Sq^{k+i-j} Sq^j + Sq^k Sq^i for 0 < i < k/2.
VerificationReport verify_section4_family2(int k, const Rewriter& rewriter = Rewriter(Prime(2)));

struct OddParameters {
    int p = 3;
    int lambda = 1;
    int a = 1;
    int k() const;
};

/// Every (p, lambda, a) with p in {3, 5, 7}, lambda | p - 1, a in {1, 2}
/// and 2 lambda p^a <= budget, sorted by (p, lambda, a).
std::vector<OddParameters> default_parameter_matrix(int budget = 500);

VerificationReport verify_claim1(const OddParameters& q, const Rewriter* rewriter = nullptr);
VerificationReport verify_claim2(const OddParameters& q, const Rewriter* rewriter = nullptr);
VerificationReport verify_claim3(const OddParameters& q, const Rewriter* rewriter = nullptr);
VerificationReport verify_final_coefficient(const OddParameters& q, const Rewriter* rewriter = nullptr);

/// Recorded shapes of relations coming from secondary operations. Only the
/// shapes are used; their existence is taken from the literature.
struct ConditionalShape {
    std::string id;
    std::string statement;
    /// Operations that must vanish on u.
    std::vector<SteenrodElement> kernel;
    /// Target: op(u), or u^power when `power` is nonzero.
    std::optional<SteenrodElement> target_op;
    int power = 0;
    /// Operations whose images may contain the target.
    std::vector<SteenrodElement> summands;
    /// Images the relation holds modulo.
    std::vector<SteenrodElement> modulo;
    bool secondary_existence_assumed = true;
};

/// Known ids: adams, goncalves, k16-discussion, secondary-a, secondary-b.
/// adams and goncalves depend on deg u. Throws std::invalid_argument on an
/// unknown id or an unsupported degree.
ConditionalShape conditional_shape(const std::string& id, int degree);
std::vector<std::string> conditional_shape_ids();

/// Evaluates the hypothesis, the source group of every summand and the
/// forced conclusion: "contradiction" when the target is nonzero and lies
/// outside the span of all listed images, "inconclusive" otherwise.
/// Throws std::invalid_argument when a needed degree exceeds the cap.
VerificationReport conditional_relation_audit(const ActionTable& table, const RingElement& u,
                                              const std::string& shape);

/// The question ring Z2[y4, y8, y12, x]/(y_i y_j) with the action
/// Sq^i x = x y_i (i = 4, 8, 12), Sq^4 y8 = y12, Sq^8 y12 = x y4.
ActionTable candidate_table(int cap);

struct CandidateOptions {
    int cap = 64;
    unsigned workers = 1;
    /// Applied to the table before any check, for negative controls.
    std::function<void(ActionTable&)> tamper;
};

VerificationReport check_counterexample_candidate(const CandidateOptions& options);
VerificationReport check_counterexample_candidate(int cap = 64);

enum class Section3Model { MultiplesOfEight, ExtraDegreeFour };

/// x (16), y8 (8) with y8^2 = 0 and Sq^8 x = x y8, or the variant with a
/// degree-4 class y4, y4^3 = 0, Sq^4 x = x y4, Sq^8 x = x y4^2.
ActionTable section3_model(Section3Model model, int cap);

/// Runs the k16-discussion audit on x y8. Passes when the contradiction is
/// forced. Throws std::invalid_argument when cap < 48.
VerificationReport verify_section3_discussion(int cap = 48, Section3Model model = Section3Model::MultiplesOfEight);

/// Runs the jobs on up to `workers` threads and returns the reports in job order.
std::vector<VerificationReport> run_parallel(const std::vector<std::function<VerificationReport()>>& jobs,
                                             unsigned workers);

} // namespace steenrod

#endif // STEENROD_PAPER_VERIFIER_HPP
