#include "config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace icelab::cli {

using nlohmann::json;

namespace {

// ------------------------------------------------------------------ source lines

struct LineCounter {
    int line = 1;
    char last = 0;
};

// Feeds the parser one character at a time so the current line is known in SAX callbacks.
struct CountingIter {
    using iterator_category = std::input_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    const char* p = nullptr;
    LineCounter* c = nullptr;

    reference operator*() const { return *p; }
    CountingIter& operator++() {
        c->last = *p;
        if (*p == '\n') ++c->line;
        ++p;
        return *this;
    }
    CountingIter operator++(int) {
        auto t = *this;
        ++*this;
        return t;
    }
    bool operator==(const CountingIter& o) const { return p == o.p; }
    bool operator!=(const CountingIter& o) const { return p != o.p; }
};

std::string child(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

// Records the line of every member and array element, keyed by dotted path ("chain.seed", "observables[1]").
class LineMapper : public nlohmann::json_sax<json> {
public:
    explicit LineMapper(LineCounter& c) : c_(c) {}

    std::map<std::string, int> lines;
    std::string duplicate;  // path of the first repeated key
    int duplicate_line = 0;

    bool null() override { return value(c_.line); }
    bool boolean(bool) override { return value(c_.line); }
    // numbers are terminated by one character of lookahead, which may be the newline
    bool number_integer(number_integer_t) override { return value(number_line()); }
    bool number_unsigned(number_unsigned_t) override { return value(number_line()); }
    bool number_float(number_float_t, const string_t&) override { return value(number_line()); }
    bool string(string_t&) override { return value(c_.line); }
    bool binary(binary_t&) override { return value(c_.line); }
    bool start_object(std::size_t) override {
        const std::string p = value_path(c_.line);
        stack_.push_back({false, p, {}, 0, {}});
        return true;
    }
    bool key(string_t& k) override {
        auto& f = stack_.back();
        f.key = k;
        const std::string p = child(f.path, k);
        if (!f.seen.insert(k).second && duplicate.empty()) {
            duplicate = p;
            duplicate_line = c_.line;
        }
        lines.emplace(p, c_.line);
        return true;
    }
    bool end_object() override {
        stack_.pop_back();
        return true;
    }
    bool start_array(std::size_t) override {
        const std::string p = value_path(c_.line);
        stack_.push_back({true, p, {}, 0, {}});
        return true;
    }
    bool end_array() override {
        stack_.pop_back();
        return true;
    }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

private:
    struct Frame {
        bool array;
        std::string path;
        std::string key;
        std::size_t index;
        std::set<std::string> seen;
    };
    LineCounter& c_;
    std::vector<Frame> stack_;

    int number_line() const { return c_.last == '\n' ? c_.line - 1 : c_.line; }
    std::string value_path(int line) {
        if (stack_.empty()) {
            lines.emplace("", line);
            return "";
        }
        auto& f = stack_.back();
        if (!f.array) return child(f.path, f.key);
        const std::string p = f.path + "[" + std::to_string(f.index++) + "]";
        lines.emplace(p, line);
        return p;
    }
    bool value(int line) {
        value_path(line);
        return true;
    }
};

// ------------------------------------------------------------------ typed access

class Ctx {
public:
    std::string source;
    std::map<std::string, int> lines;

    [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
        throw ValidationError(source + ":" + std::to_string(line_of(path)) + ": " + (path.empty() ? "" : path + ": ") +
                              msg);
    }

private:
    int line_of(std::string path) const {
        for (;;) {
            if (auto it = lines.find(path); it != lines.end()) return it->second;
            if (path.empty()) return 1;
            const auto cut = path.find_last_of(".[");
            path = cut == std::string::npos ? "" : path.substr(0, cut);
        }
    }
};

template <class T>
struct Convert;

template <>
struct Convert<bool> {
    static bool get(const Ctx& c, const json& j, const std::string& p) {
        if (!j.is_boolean()) c.fail(p, "expected true or false");
        return j.get<bool>();
    }
};

template <>
struct Convert<std::string> {
    static std::string get(const Ctx& c, const json& j, const std::string& p) {
        if (!j.is_string()) c.fail(p, "expected a string");
        return j.get<std::string>();
    }
};

template <>
struct Convert<double> {
    static double get(const Ctx& c, const json& j, const std::string& p) {
        if (!j.is_number()) c.fail(p, "expected a number");
        return j.get<double>();
    }
};

template <>
struct Convert<long> {
    static long get(const Ctx& c, const json& j, const std::string& p) {
        if (!j.is_number_integer()) c.fail(p, "expected an integer");
        if (j.is_number_unsigned() && j.get<std::uint64_t>() > std::uint64_t(std::numeric_limits<long>::max()))
            c.fail(p, "integer out of range");
        return j.get<long>();
    }
};

template <>
struct Convert<int> {
    static int get(const Ctx& c, const json& j, const std::string& p) {
        const long v = Convert<long>::get(c, j, p);
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) c.fail(p, "integer out of range");
        return static_cast<int>(v);
    }
};

template <>
struct Convert<std::uint64_t> {
    static std::uint64_t get(const Ctx& c, const json& j, const std::string& p) {
        if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<long>() < 0))
            c.fail(p, "expected a nonnegative integer");
        return j.get<std::uint64_t>();
    }
};

template <>
struct Convert<Face> {
    static Face get(const Ctx& c, const json& j, const std::string& p) {
        if (!j.is_array() || j.size() != 2) c.fail(p, "expected [i, j]");
        return {Convert<int>::get(c, j[0], p + "[0]"), Convert<int>::get(c, j[1], p + "[1]")};
    }
};

template <class T>
struct Convert<std::vector<T>> {
    static std::vector<T> get(const Ctx& c, const json& j, const std::string& p) {
        if (!j.is_array()) c.fail(p, "expected an array");
        std::vector<T> out;
        for (std::size_t k = 0; k < j.size(); ++k) out.push_back(Convert<T>::get(c, j[k], p + "[" + std::to_string(k) + "]"));
        return out;
    }
};

// One JSON object; every key must be read before finish() or it is reported as unknown.
class Obj {
public:
    Obj(const Ctx& c, const json& j, std::string path) : c_(c), j_(j), path_(std::move(path)) {
        if (!j_.is_object()) c_.fail(path_, "expected an object");
    }

    bool has(const std::string& k) const { return j_.contains(k); }
    std::string at(const std::string& k) const { return child(path_, k); }
    [[noreturn]] void fail(const std::string& k, const std::string& msg) const { c_.fail(at(k), msg); }
    [[noreturn]] void fail(const std::string& msg) const { c_.fail(path_, msg); }

    template <class T>
    T req(const std::string& k) {
        used_.insert(k);
        if (!has(k)) c_.fail(path_, "missing required field '" + k + "'");
        return Convert<T>::get(c_, j_.at(k), at(k));
    }
    template <class T>
    T opt(const std::string& k, T def) {
        used_.insert(k);
        return has(k) ? Convert<T>::get(c_, j_.at(k), at(k)) : def;
    }
    Obj sub(const std::string& k) {
        used_.insert(k);
        if (!has(k)) c_.fail(path_, "missing required field '" + k + "'");
        return Obj(c_, j_.at(k), at(k));
    }
    // An absent optional object reads as {}.
    Obj opt_sub(const std::string& k) {
        used_.insert(k);
        static const json empty = json::object();
        return Obj(c_, has(k) ? j_.at(k) : empty, at(k));
    }
    void forbid(const std::string& k, const std::string& why) const {
        if (has(k)) fail(k, why);
    }
    void finish() const {
        for (const auto& item : j_.items())
            if (!used_.count(item.key())) c_.fail(at(item.key()), "unknown key '" + item.key() + "'");
    }

private:
    const Ctx& c_;
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

// ------------------------------------------------------------------ sections

Budget read_budget(Obj& top) {
    Obj b = top.opt_sub("budget");
    Budget out;
    out.max_N = b.opt<int>("max_N", out.max_N);
    out.max_sweeps = b.opt<long>("max_sweeps", out.max_sweeps);
    if (out.max_N < 1) b.fail("max_N", "must be positive");
    if (out.max_sweeps < 0) b.fail("max_sweeps", "must be nonnegative");
    b.finish();
    return out;
}

void check_N(const Obj& o, const std::string& key, int N, const Budget& b) {
    if (N < 1) o.fail(key, "must be positive");
    if (N > b.max_N)
        o.fail(key, std::to_string(N) + " exceeds the budget of " + std::to_string(b.max_N) + " (raise budget.max_N)");
}

ChainSpec read_chain(Obj& top, const Overrides& o, const Budget& b) {
    Obj c = top.sub("chain");
    ChainSpec s;
    if (o.seed) {
        c.opt<std::uint64_t>("seed", 0);
        s.seed = *o.seed;
    } else {
        s.seed = c.req<std::uint64_t>("seed");
    }
    s.sweeps = c.opt<long>("sweeps", s.sweeps);
    s.burn_in = c.opt<long>("burn_in", s.burn_in);
    s.thinning = c.opt<long>("thinning", s.thinning);
    s.initial_state = c.opt<std::string>("initial_state", s.initial_state);
    if (s.sweeps < 0) c.fail("sweeps", "must be nonnegative");
    if (s.burn_in < 0) c.fail("burn_in", "must be nonnegative");
    if (s.thinning < 1) c.fail("thinning", "must be at least 1");
    if (s.sweeps + s.burn_in > b.max_sweeps)
        c.fail("sweeps", "burn_in + sweeps exceeds the budget of " + std::to_string(b.max_sweeps) +
                             " (raise budget.max_sweeps)");
    const std::set<std::string> starts{"flat", "open", "closed", "random"};
    if (!starts.count(s.initial_state)) c.fail("initial_state", "expected flat, open, closed or random");
    c.finish();
    return s;
}

// c_b may be +inf, written "inf".
double read_cb(Obj& p, const Ctx& ctx, const json& raw) {
    if (raw.is_string()) {
        p.opt<std::string>("c_b", "");
        if (raw.get<std::string>() != "inf") ctx.fail(p.at("c_b"), "expected a number or \"inf\"");
        return std::numeric_limits<double>::infinity();
    }
    return p.opt<double>("c_b", 1);
}

void read_model(Obj& top, const Ctx& ctx, const json& root, JobConfig& job, const Overrides& o) {
    const Budget budget = read_budget(top);
    RunSpec& r = job.run;
    const std::string model = top.req<std::string>("model");
    try {
        r.model = parse_model_kind(model);
    } catch (const std::exception&) {
        top.fail("model", "unknown model '" + model + "' (heights, spins, rc, coupling, at)");
    }

    Obj p = top.sub("params");
    switch (r.model) {
        case ModelKind::heights:
        case ModelKind::spins:
        case ModelKind::coupling: {
            r.params.a = p.opt<double>("a", 1);
            r.params.b = p.opt<double>("b", 1);
            r.params.c = p.req<double>("c");
            if (p.has("c_b")) {
                if (r.model == ModelKind::coupling) p.fail("c_b", "the coupling chain runs the plain part only");
                r.params.c_b = read_cb(p, ctx, root.at("params").at("c_b"));
                r.mode = WeightMode::boundary_cb;
            }
            try {
                r.params.validate();
            } catch (const std::exception& e) {
                p.fail(e.what());
            }
            if (r.model == ModelKind::coupling && r.params.c < r.params.a + r.params.b)
                p.fail("c", "the coupling needs c >= a + b");
            break;
        }
        case ModelKind::rc: {
            r.rc.q = p.req<double>("q");
            r.rc.q_b = p.opt<double>("q_b", 1);
            if (p.has("p")) {
                r.rc.p = p.opt<double>("p", 0);
            } else {
                if (!(r.rc.q >= 1)) p.fail("q", "give p explicitly when q < 1");
                r.rc.p = p_critical(r.rc.q);
            }
            if (p.has("p_h") != p.has("p_v")) p.fail("p_h and p_v come together");
            if (p.has("p_h")) {
                r.rc.anisotropic = true;
                r.rc.p_h = p.req<double>("p_h");
                r.rc.p_v = p.req<double>("p_v");
            }
            try {
                r.rc.validate();
            } catch (const std::exception& e) {
                p.fail(e.what());
            }
            break;
        }
        case ModelKind::at: {
            r.J = p.req<double>("J");
            if (!(r.J > 0)) p.fail("J", "must be positive");
            break;
        }
    }
    p.finish();

    Obj d = top.sub("domain");
    r.domain.shape = d.opt<std::string>("shape", "diamond");
    if (r.domain.shape == "rectangle") {
        d.forbid("N", "rectangles take width and height");
        r.domain.width = d.req<int>("width");
        r.domain.height = d.req<int>("height");
        check_N(d, "width", r.domain.width, budget);
        check_N(d, "height", r.domain.height, budget);
    } else if (r.domain.shape == "diamond" || r.domain.shape == "square") {
        r.domain.N = d.req<int>("N");
        check_N(d, "N", r.domain.N, budget);
    } else {
        d.fail("shape", "expected diamond, square or rectangle");
    }
    r.domain.center = d.opt<Face>("center", {});
    const std::string parity = d.opt<std::string>("parity", "");
    try {
        const Parity actual = r.domain.build().parity();
        if (!parity.empty() && parity != to_string(actual)) d.fail("parity", "the domain is " + to_string(actual));
    } catch (const DomainError& e) {
        d.fail(e.what());
    }
    d.finish();

    if (r.model == ModelKind::heights || r.model == ModelKind::spins) {
        Obj b = top.opt_sub("boundary");
        if (b.opt<std::string>("type", "flat") != "flat") b.fail("type", "only flat boundaries are supported");
        r.boundary_n = b.opt<int>("n", 0);
        b.finish();
    } else {
        top.forbid("boundary", "the boundary of this model is fixed (rc: through q_b, coupling: (0,1), at: flat 0)");
    }

    r.chain = read_chain(top, o, budget);
    if ((r.model == ModelKind::heights || r.model == ModelKind::spins || r.model == ModelKind::at) &&
        r.chain.initial_state != "flat")
        ctx.fail("chain.initial_state", "height chains start from 'flat'");
    r.observables = top.req<std::vector<std::string>>("observables");
    if (r.observables.empty()) top.fail("observables", "at least one observable is needed");
    r.chains = top.opt<int>("chains", 1);
    if (r.chains < 1) top.fail("chains", "must be at least 1");
    r.threads = o.threads;
    job.snapshot = top.opt<std::string>("snapshot", "");
}

void read_experiment(Obj& top, JobConfig& job, const Overrides& o) {
    const Budget budget = read_budget(top);
    const std::string name = top.req<std::string>("experiment");
    top.forbid("snapshot", "experiments do not write snapshots");
    Obj p = top.opt_sub("params");
    const ChainSpec chain = read_chain(top, o, budget);
    if (name == "variance_scaling") {
        auto& c = job.variance;
        job.kind = JobKind::variance_scaling;
        c.c_list = p.opt("c_list", c.c_list);
        c.N_list = p.opt("N_list", c.N_list);
        c.a = p.opt("a", c.a);
        c.b = p.opt("b", c.b);
        c.sample_every = p.opt("sample_every", c.sample_every);
        if (c.c_list.empty()) p.fail("c_list", "must not be empty");
        if (c.N_list.size() < 2) p.fail("N_list", "a fit needs at least two sizes");
        for (std::size_t k = 0; k < c.N_list.size(); ++k) {
            check_N(p, "N_list[" + std::to_string(k) + "]", c.N_list[k], budget);
            if (k && c.N_list[k] <= c.N_list[k - 1]) p.fail("N_list", "sizes must increase");
        }
        for (std::size_t k = 0; k < c.c_list.size(); ++k)
            if (c.c_list[k] < c.a + c.b) p.fail("c_list[" + std::to_string(k) + "]", "the coupling needs c >= a + b");
        if (c.sample_every < 1) p.fail("sample_every", "must be at least 1");
        c.chain = chain;
        c.threads = o.threads;
    } else if (name == "height_gibbs" || name == "arrow_bias") {
        const bool gibbs = name == "height_gibbs";
        job.kind = gibbs ? JobKind::height_gibbs : JobKind::arrow_bias;
        double a = p.opt("a", 1.0), b = p.opt("b", 1.0), c = p.opt("c", 3.0);
        int N = p.opt("N", 32);
        check_N(p, "N", N, budget);
        if (!(a > 0) || !(b > 0) || !(c > 0)) p.fail("weights must be positive");
        if (gibbs) job.gibbs = {a, b, c, N, chain, o.threads};
        else job.arrows = {a, b, c, N, chain, o.threads};
    } else if (name == "at_selfdual") {
        auto& c = job.at;
        job.kind = JobKind::at_selfdual;
        c.J_list = p.opt("J_list", c.J_list);
        c.half_width = p.opt("half_width", c.half_width);
        c.distances = p.opt("distances", c.distances);
        check_N(p, "half_width", 2 * c.half_width, budget);
        if (c.J_list.empty()) p.fail("J_list", "must not be empty");
        for (std::size_t k = 0; k < c.J_list.size(); ++k) {
            const std::string key = "J_list[" + std::to_string(k) + "]";
            if (!(c.J_list[k] > 0)) p.fail(key, "must be positive");
            if (!selfdual_params(c.J_list[k]).j_less_u) p.fail(key, "the decay regime needs J < U on the self-dual curve");
        }
        for (std::size_t k = 0; k < c.distances.size(); ++k)
            if (c.distances[k] < 2 || c.distances[k] % 2 || c.distances[k] > c.half_width)
                p.fail("distances[" + std::to_string(k) + "]", "distances are even, at least 2 and at most half_width");
        c.chain = chain;
        c.threads = o.threads;
    } else if (name == "qb_interpolation") {
        auto& c = job.qb;
        job.kind = JobKind::qb_interpolation;
        c.q = p.opt("q", c.q);
        c.q_b_list = p.opt("q_b_list", c.q_b_list);
        c.N = p.opt("N", c.N);
        check_N(p, "N", c.N, budget);
        if (!(c.q >= 1)) p.fail("q", "must be at least 1");
        for (std::size_t k = 0; k < c.q_b_list.size(); ++k)
            if (!(c.q_b_list[k] > 0)) p.fail("q_b_list[" + std::to_string(k) + "]", "must be positive");
        c.chain = chain;
        c.threads = o.threads;
    } else {
        top.fail("experiment", "unknown experiment '" + name +
                                   "' (variance_scaling, height_gibbs, at_selfdual, qb_interpolation, arrow_bias)");
    }
    p.finish();
}

}  // namespace

JobConfig parse_config(const std::string& text, const std::string& source, const Overrides& o) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(source + ": invalid JSON: " + e.what());
    }
    Ctx ctx;
    ctx.source = source;
    {
        LineCounter counter;
        LineMapper mapper(counter);
        json::sax_parse(CountingIter{text.data(), &counter}, CountingIter{text.data() + text.size(), &counter}, &mapper);
        ctx.lines = std::move(mapper.lines);
        if (!mapper.duplicate.empty())
            throw ValidationError(source + ":" + std::to_string(mapper.duplicate_line) + ": " + mapper.duplicate +
                                  ": duplicate key");
    }

    JobConfig job;
    Obj top(ctx, root, "");
    if (top.has("model") == top.has("experiment")) top.fail("exactly one of 'model' and 'experiment' is required");
    if (top.has("model")) read_model(top, ctx, root, job, o);
    else read_experiment(top, job, o);
    job.output = top.opt<std::string>("output", "");
    top.finish();
    return job;
}

JobConfig load_config(const std::string& path, const Overrides& o) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open config");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path, o);
}

std::vector<ResultRow> run_job(const JobConfig& job) {
    switch (job.kind) {
        case JobKind::model: return run_chain(job.run);
        case JobKind::variance_scaling: return experiment_variance_scaling(job.variance).rows;
        case JobKind::height_gibbs: return experiment_height_gibbs(job.gibbs);
        case JobKind::at_selfdual: return experiment_at_selfdual(job.at).rows;
        case JobKind::qb_interpolation: return experiment_qb_interpolation(job.qb).rows;
        case JobKind::arrow_bias: return experiment_arrow_bias(job.arrows);
    }
    return {};
}

}  // namespace icelab::cli
