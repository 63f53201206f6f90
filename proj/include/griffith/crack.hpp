#pragma once

#include "griffith/mesh.hpp"

#include <vector>

namespace griffith {

/// Monotone-growing set of cracked facets; the discrete crack.
/// Valid states only contain brittle facets of the mesh.
struct CrackState {
    std::vector<char> in; // sized mesh.n_facets()
    int count = 0;

    static CrackState empty(const Mesh& mesh) {
        CrackState c;
        c.in.assign(mesh.facets.size(), 0);
        return c;
    }

    bool contains(int f) const { return in[f] != 0; }

    void add(int f) {
        if (!in[f]) {
            in[f] = 1;
            ++count;
        }
    }

    bool subset_of(const CrackState& other) const {
        for (std::size_t f = 0; f < in.size(); ++f)
            if (in[f] && !other.in[f]) return false;
        return true;
    }

    bool operator==(const CrackState& other) const { return in == other.in; }

    std::vector<int> facet_list() const {
        std::vector<int> out;
        out.reserve(count);
        for (std::size_t f = 0; f < in.size(); ++f)
            if (in[f]) out.push_back(static_cast<int>(f));
        return out;
    }

    bool valid_for(const Mesh& mesh) const {
        if (in.size() != mesh.facets.size()) return false;
        for (std::size_t f = 0; f < in.size(); ++f)
            if (in[f] && !mesh.brittle[f]) return false;
        return true;
    }
};

} // namespace griffith
