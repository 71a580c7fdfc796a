#include "icelab/snapshot.hpp"

#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

namespace icelab {

std::string to_string(SnapshotKind k) {
    switch (k) {
        case SnapshotKind::heights: return "heights";
        case SnapshotKind::spins: return "spins";
        case SnapshotKind::rc: return "rc";
    }
    return "?";
}

Snapshot Snapshot::of(const HeightFunction& h) {
    Snapshot s;
    s.geo = h.geo;
    s.kind = SnapshotKind::heights;
    s.heights = h;
    return s;
}

Snapshot Snapshot::of(const SpinConfig& sp) {
    Snapshot s;
    s.geo = sp.geo;
    s.kind = SnapshotKind::spins;
    s.spins = sp;
    return s;
}

Snapshot Snapshot::of(GeometryPtr geo, const EdgeBits& e) {
    Snapshot s;
    s.geo = std::move(geo);
    s.kind = SnapshotKind::rc;
    s.edges = e;
    return s;
}

void write_snapshot(std::ostream& os, const Snapshot& s) {
    os << "# icelab state\n@domain\n";
    write_domain(os, s.geo->domain());
    os << '@' << to_string(s.kind) << '\n';
    switch (s.kind) {
        case SnapshotKind::heights: write_heights(os, s.heights); break;
        case SnapshotKind::spins: write_spins(os, s.spins); break;
        case SnapshotKind::rc: write_rc(os, s.edges); break;
    }
}

namespace {

struct Section {
    std::string name;
    int first_line = 0;  // line number of the header
    std::string body;
};

// Inner readers count lines from the start of their section; shift them to file lines.
[[noreturn]] void rethrow_shifted(const Section& sec, const std::exception& e) {
    static const std::regex lead(R"(^line (\d+): )");
    std::smatch m;
    const std::string msg = e.what();
    if (std::regex_search(msg, m, lead))
        throw SnapshotError("line " + std::to_string(sec.first_line + std::stoi(m[1])) + ": " + m.suffix().str());
    throw SnapshotError("@" + sec.name + " section at line " + std::to_string(sec.first_line) + ": " + msg);
}

}  // namespace

Snapshot read_snapshot(std::istream& is) {
    std::vector<Section> sections;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '@') {
            sections.push_back({line.substr(1), lineno, {}});
            continue;
        }
        if (sections.empty()) {
            if (line.empty() || line[0] == '#') continue;
            throw SnapshotError("line " + std::to_string(lineno) + ": expected '@domain'");
        }
        sections.back().body += line + '\n';
    }
    if (sections.size() != 2 || sections[0].name != "domain")
        throw SnapshotError("a state file holds an @domain section followed by exactly one configuration section");

    Snapshot s;
    try {
        std::istringstream body(sections[0].body);
        s.geo = make_geometry(read_domain(body));
    } catch (const std::exception& e) {
        rethrow_shifted(sections[0], e);
    }
    const Section& sec = sections[1];
    std::istringstream body(sec.body);
    try {
        if (sec.name == "heights") {
            s.kind = SnapshotKind::heights;
            s.heights = read_heights(body, s.geo);
        } else if (sec.name == "spins") {
            s.kind = SnapshotKind::spins;
            s.spins = read_spins(body, s.geo);
        } else if (sec.name == "rc") {
            s.kind = SnapshotKind::rc;
            s.edges = read_rc(body, s.geo->primal().graph.edge_count());
        } else {
            throw SnapshotError("line " + std::to_string(sec.first_line) + ": unknown section '@" + sec.name + "'");
        }
    } catch (const SnapshotError&) {
        throw;
    } catch (const std::exception& e) {
        rethrow_shifted(sec, e);
    }
    return s;
}

}  // namespace icelab
