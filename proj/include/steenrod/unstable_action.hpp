#ifndef STEENROD_UNSTABLE_ACTION_HPP
#define STEENROD_UNSTABLE_ACTION_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "steenrod/graded_ring.hpp"
#include "steenrod/steenrod_core.hpp"

namespace steenrod {

/// A required sub-top value is absent from the table and its target group is nonzero.
class MissingActionValue : public std::runtime_error {
public:
    MissingActionValue(std::string generator, std::string operation);
    const std::string& generator() const { return generator_; }
    const std::string& operation() const { return operation_; }

private:
    std::string generator_;
    std::string operation_;
};

/// "Sq^i", "P^s" or "b".
std::string letter_name(Letter l, Prime p);

/// Values of the operations on the generators of a ring.
///
/// Only the sub-top range is stored: Sq^i(g) for 0 < i < |g| at p = 2;
/// b(g) and P^s(g) for 0 < 2s < |g| at odd p. The identity, the top
/// operation (g^2, resp. g^p) and everything above the top are computed.
/// An absent entry whose target group is zero is zero.
class ActionTable {
public:
    explicit ActionTable(std::shared_ptr<const RingBasis> ring);

    const RingBasis& ring() const { return *ring_; }
    const std::shared_ptr<const RingBasis>& ring_ptr() const { return ring_; }
    Prime prime() const { return ring_->prime(); }

    /// Records a value. Throws std::invalid_argument when the degree is
    /// wrong, the target group is zero but the value is not, or the entry
    /// lies at or above the top and disagrees with the forced value.
    void set(std::size_t generator, Letter op, const RingElement& value);
    void set(const std::string& generator, Letter op, const RingElement& value);

    /// Value on a generator after applying the unstable axioms. Throws
    /// MissingActionValue for an absent sub-top entry into a nonzero group.
    RingElement value(std::size_t generator, Letter op) const;

    /// Whether op on g is a stored (sub-top) slot.
    bool is_stored_slot(std::size_t generator, Letter op) const;

    using Key = std::pair<std::size_t, std::pair<bool, int>>;
    const std::map<Key, RingElement>& entries() const { return entries_; }

    /// Free-form notes on how the table was populated, carried into reports.
    std::vector<std::string> notes;

private:
    int target_degree(std::size_t generator, Letter op) const;
    /// Forced value for the identity, top and above-top range, if op is there.
    std::optional<RingElement> forced(std::size_t generator, Letter op) const;

    std::shared_ptr<const RingBasis> ring_;
    std::map<Key, RingElement> entries_;
};

/// Cartan-formula evaluation with a private memo table. Not thread-safe;
/// use one evaluator per thread.
class ActionEvaluator {
public:
    explicit ActionEvaluator(const ActionTable& table) : table_(table) {}

    /// Single letter on an element.
    RingElement apply(Letter op, const RingElement& e);
    /// Monomial, letters applied right to left.
    RingElement act(const SteenrodMonomial& m, const RingElement& e);
    RingElement act(const SteenrodElement& op, const RingElement& e);
    /// Single letter on a free (not necessarily standard) monomial.
    const RingElement& on_monomial(Letter op, const Exponents& m);

private:
    struct KeyHash {
        std::size_t operator()(const std::pair<int, Exponents>& k) const;
    };
    RingElement compute(Letter op, const Exponents& m);

    const ActionTable& table_;
    std::unordered_map<std::pair<int, Exponents>, RingElement, KeyHash> memo_;
};

/// Throws DegreeOverflow when deg(op) + deg(e) exceeds the cap.
RingElement act(const SteenrodElement& op, const RingElement& e, const ActionTable& table);

/// F_2[t_1..t_n] with |t_j| = 1 at p = 2; Lambda(e_1..e_n) (x) F_p[t_1..t_n]
/// with |e_j| = 1, |t_j| = 2 and b(e_j) = t_j at odd p.
ActionTable faithful_model(int n, Prime p, int cap);

struct CoherenceViolation {
    int degree = 0;          ///< degree of the compared values
    std::string kind;        ///< adem, unstable, bockstein, relation, missing
    std::string relation;    ///< the identity being checked
    std::string element;     ///< the class it was evaluated on
    std::string lhs;
    std::string rhs;
};

struct CoherenceReport {
    int degree_limit = 0;
    std::size_t checks = 0;
    std::vector<CoherenceViolation> violations;
    bool passed() const { return violations.empty(); }
};

/// Compares act(composite, b) with act(normalize(composite), b) for every
/// inadmissible two-operation composite (at odd p also P^a b P^b and b b)
/// and every basis class b with total degree <= degree_limit, checks the
/// top axiom on every basis class, and checks that each single operation
/// carries every defining relation to zero. Work is split over `workers`
/// threads; violations are sorted by degree, then relation, then element.
CoherenceReport check_adem_coherence(const ActionTable& table, int degree_limit, unsigned workers = 1);

struct ImageWitness {
    std::string target; ///< "x" or "x^2"
    Letter op;
    RingElement y;
};

struct ImageAudit {
    std::vector<ImageWitness> witnesses;
    bool square_checked = false;
    bool passed() const { return witnesses.empty(); }
};

/// Solves op(y) = x with deg y < deg x and op(y) = x^2 with
/// deg y not in {deg x, 2 deg x}, over all single operations of positive
/// degree. Each solvable case contributes one witness y.
ImageAudit steenrod_image_audit(const ActionTable& table, const RingElement& x);

} // namespace steenrod

#endif // STEENROD_UNSTABLE_ACTION_HPP
