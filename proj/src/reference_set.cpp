#include "mugi/reference_set.hpp"

#include <algorithm>

namespace mugi {

ReferenceSet first_references(const ReferenceSet& refs, std::size_t n) {
    ReferenceSet out = refs;
    out.references.resize(std::min(n, refs.references.size()));
    return out;
}

}  // namespace mugi
