#ifndef STEENROD_RING_FILE_HPP
#define STEENROD_RING_FILE_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "steenrod/expr.hpp"
#include "steenrod/graded_ring.hpp"
#include "steenrod/unstable_action.hpp"

namespace steenrod {

/// Problem in a ring file. Line 0 means the problem has no single location.
class RingFileError : public std::runtime_error {
public:
    RingFileError(int line, int column, const std::string& message);
    /// The same error prefixed with the file it came from.
    RingFileError(const std::string& path, const RingFileError& inner);
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    int line_;
    int column_;
    std::string message_;
};

struct ActionEntry {
    std::string generator;
    Letter op;
    Polynomial value;
    int value_degree = -1; ///< -1 for the zero polynomial
    SourceSpan span;
};

/// Parsed but unvalidated ring file.
struct RingFile {
    RingPresentation presentation;
    std::vector<SourceSpan> relation_spans;
    std::vector<ActionEntry> action;
    bool cap_defaulted = false;
};

struct LoadedRing {
    std::shared_ptr<const RingBasis> basis;
    ActionTable table;
    bool cap_defaulted = false;
};

/// Reads the line-oriented format, or JSON when the first non-blank
/// character is '{'. A missing cap defaults to four times the largest
/// generator degree.
RingFile parse_ring_file(const std::string& text);

/// Validates homogeneity, degree bounds, zero-group targets and the
/// unstable axioms, then builds the basis and the action table.
LoadedRing load_ring(const RingFile& file);
LoadedRing load_ring_text(const std::string& text);
/// Throws RingFileError when the file cannot be read.
LoadedRing load_ring_path(const std::string& path);

/// Polynomial over the named generators. Products are reordered into
/// generator order with Koszul signs; an odd generator occurring twice
/// kills the term. `origin` offsets reported positions.
Polynomial parse_polynomial(const std::string& text, const std::vector<Generator>& generators, Prime p,
                            SourceSpan origin = {});

/// Common degree of the monomials, -1 for the zero polynomial. Throws
/// std::invalid_argument when inhomogeneous.
int polynomial_degree(const Polynomial& poly, const std::vector<Generator>& generators);

/// Homogeneous class of a ring given as a polynomial; "0" needs `zero_degree`.
RingElement parse_ring_element(const std::string& text, const RingBasis& basis, int zero_degree = 0);

} // namespace steenrod

#endif // STEENROD_RING_FILE_HPP
