#pragma once

// State files: a domain followed by one configuration on it.
//
//   # comments anywhere
//   @domain
//   D <faces> / F i j / B x2 y2 records
//   @heights | @spins | @rc
//   face grid (heights, spins) or E z bit lines (open edges of D•)

#include "icelab/random_cluster.hpp"
#include "icelab/representations.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace icelab {

class SnapshotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SnapshotKind { heights, spins, rc };
std::string to_string(SnapshotKind k);

struct Snapshot {
    GeometryPtr geo;
    SnapshotKind kind = SnapshotKind::heights;
    HeightFunction heights;  // kind == heights
    SpinConfig spins;        // kind == spins
    EdgeBits edges;          // kind == rc, indexed like D• edges

    static Snapshot of(const HeightFunction& h);
    static Snapshot of(const SpinConfig& s);
    static Snapshot of(GeometryPtr geo, const EdgeBits& e);
};

void write_snapshot(std::ostream& os, const Snapshot& s);
// Validates the configuration; errors carry line numbers of the whole file.
Snapshot read_snapshot(std::istream& is);

}  // namespace icelab
