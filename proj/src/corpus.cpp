#include "agemap/corpus.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "agemap/errors.hpp"

namespace agemap {

std::pair<ReferenceUniverse, IncidenceMatrix> build_incidence(const std::vector<Document>& docs) {
    // canonical-sorted union; first-seen key wins for raw/pub_year payload
    std::map<std::string, const ReferenceKey*> universe;
    for (const auto& doc : docs)
        for (const auto& ref : doc.references) universe.try_emplace(ref.canonical, &ref);

    ReferenceUniverse u;
    u.refs.reserve(universe.size());
    u.index.reserve(universe.size());
    for (const auto& [canonical, key] : universe) {
        u.index.emplace(canonical, static_cast<std::uint32_t>(u.refs.size()));
        u.refs.push_back(*key);
    }

    IncidenceMatrix m;
    m.n_docs = docs.size();
    m.n_refs = u.refs.size();
    m.rows.reserve(docs.size());
    m.doc_ids.reserve(docs.size());
    std::unordered_set<std::string> seen_ids;
    for (const auto& doc : docs) {
        if (!seen_ids.insert(doc.doc_id).second)
            throw DuplicateDocId("duplicate doc_id '" + doc.doc_id + "'");
        std::vector<std::uint32_t> row;
        row.reserve(doc.references.size());
        for (const auto& ref : doc.references) row.push_back(u.index.at(ref.canonical));
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        m.rows.push_back(std::move(row));
        m.doc_ids.push_back(doc.doc_id);
    }
    return {std::move(u), std::move(m)};
}

PruneResult prune_isolated(const IncidenceMatrix& m) {
    // a document is isolated iff none of its columns is cited by anyone else
    std::vector<std::uint32_t> citing(m.n_refs, 0);
    for (const auto& row : m.rows)
        for (const auto col : row) ++citing[col];

    PruneResult result;
    result.matrix.n_refs = m.n_refs;
    for (std::size_t i = 0; i < m.n_docs; ++i) {
        const bool shared = std::any_of(m.rows[i].begin(), m.rows[i].end(),
                                        [&](std::uint32_t col) { return citing[col] >= 2; });
        if (shared) {
            result.matrix.rows.push_back(m.rows[i]);
            result.matrix.doc_ids.push_back(m.doc_ids[i]);
        } else {
            result.removed_doc_ids.push_back(m.doc_ids[i]);
        }
    }
    result.matrix.n_docs = result.matrix.rows.size();
    return result;
}

std::pair<int, int> year_range(const ReferenceUniverse& u) {
    int lo = 0, hi = 0;
    bool any = false;
    for (const auto& ref : u.refs) {
        if (!ref.pub_year) continue;
        if (!any) {
            lo = hi = *ref.pub_year;
            any = true;
        } else {
            lo = std::min(lo, *ref.pub_year);
            hi = std::max(hi, *ref.pub_year);
        }
    }
    if (!any) throw NoYearsAvailable("no reference carries a parseable publication year");
    return {lo, hi};
}

} // namespace agemap
