#include "escprob/runner.hpp"

#include "escprob/errors.hpp"
#include "escprob/escape_result.hpp"
#include "escprob/graphio.hpp"
#include "escprob/oracle.hpp"
#include "escprob/powerseries.hpp"
#include "escprob/recinvert.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace escprob {

namespace {

std::string tag_name(VertexTag tag) {
    switch (tag) {
    case VertexTag::generic:
        return "generic";
    case VertexTag::forced_one:
    case VertexTag::absorbing_t:
        return "one";
    case VertexTag::forced_zero:
    case VertexTag::absorbing_p:
        return "zero";
    case VertexTag::undefined:
        return "undefined";
    }
    return "?";
}

unsigned digits_for(const Rational& eps) {
    // ceil(-log10 eps) + 2 significant digits
    long d = 1;
    Rational x = eps;
    while (x < 1 && d < 64) {
        x *= 10;
        ++d;
    }
    return static_cast<unsigned>(d + 1);
}

std::string load_graph_text(const RunConfig& config) {
    if (!config.graph_text.empty()) return config.graph_text;
    std::ifstream in(config.graph_path, std::ios::binary);
    if (!in) throw ParseError("cannot open graph file '" + config.graph_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Row {
    int vertex;
    std::string tag;
    std::string decimal;
    std::string hex;
};

void emit_rows(const std::vector<Row>& rows, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::tsv) {
        for (const Row& r : rows)
            out << r.vertex << '\t' << r.tag << '\t' << r.decimal << '\t' << r.hex << '\n';
    } else {
        for (const Row& r : rows) {
            nlohmann::json j;
            j["vertex"] = r.vertex;
            j["tag"] = r.tag;
            j["probability"] = r.decimal;
            j["hex"] = r.hex;
            out << j.dump() << '\n';
        }
    }
}

std::vector<Row> rows_from_result(const EscapeResult& res, unsigned digits) {
    std::vector<Row> rows;
    rows.reserve(res.entries.size());
    for (const EscapeEntry& e : res.entries) {
        Row r;
        r.vertex = e.vertex;
        r.tag = tag_name(e.tag);
        if (e.tag == VertexTag::undefined) {
            r.decimal = "-";
            r.hex = "-";
        } else {
            r.decimal = mp_to_decimal(e.probability, digits);
            r.hex = mp_to_hex(e.probability);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void validate(const RunConfig& config, int n) {
    if (config.t == config.p) throw InvalidQueryError("t and p must differ");
    if (config.t < 0 || config.t >= n || config.p < 0 || config.p >= n)
        throw InvalidQueryError("t and p must be vertex ids in [0, n)");
    if (config.eps <= 0 || config.eps >= 1) throw InvalidQueryError("eps must be in (0, 1)");
}

} // namespace

Method method_from_name(const std::string& name) {
    if (name == "recinvert") return Method::recinvert;
    if (name == "powerseries") return Method::powerseries;
    if (name == "oracle") return Method::oracle;
    if (name == "simulate") return Method::simulate;
    throw InvalidQueryError("unknown method '" + name + "'");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        std::string text = load_graph_text(config);
        GraphHeader hdr = peek_graph_header(text);
        validate(config, hdr.n);
        unsigned bits = transition_build_bits(hdr.n, config.eps);
        Graph g = parse_graph(text, bits);
        unsigned digits = digits_for(config.eps);

        std::vector<Row> rows;
        switch (config.method) {
        case Method::recinvert:
            rows = rows_from_result(escape_via_recinvert(g, config.t, config.p, config.eps), digits);
            break;
        case Method::powerseries:
            rows = rows_from_result(
                escape_via_powerseries(g, config.t, config.p, config.eps, config.h_override), digits);
            break;
        case Method::oracle: {
            auto exact = exact_escape(g, config.t, config.p);
            Classification cls = classify_vertices(g, config.t, config.p);
            for (int v = 0; v < g.n; ++v) {
                Row r;
                r.vertex = v;
                r.tag = tag_name(cls.tag[static_cast<std::size_t>(v)]);
                const auto& val = exact[static_cast<std::size_t>(v)];
                if (!val) {
                    r.decimal = "-";
                    r.hex = "-";
                } else {
                    r.decimal = rational_to_decimal(*val, digits);
                    r.hex = mp_to_hex(from_rational(*val, PrecisionBudget(config.eps).bits));
                }
                rows.push_back(std::move(r));
            }
            break;
        }
        case Method::simulate: {
            SimulationResult sim = simulate_escape(g, config.t, config.p, config.trials, config.seed);
            Classification cls = classify_vertices(g, config.t, config.p);
            std::uint64_t capped = 0;
            for (const SimulatedVertex& sv : sim.per_vertex) {
                Row r;
                r.vertex = sv.vertex;
                r.tag = tag_name(cls.tag[static_cast<std::size_t>(sv.vertex)]);
                r.decimal = sv.estimate == 0 ? "0" : rational_to_decimal(sv.estimate, digits);
                r.hex = mp_to_hex(from_rational(sv.estimate, 53));
                rows.push_back(std::move(r));
                capped += sv.capped;
            }
            err << "simulate: trials=" << sim.trials << " seed=" << sim.seed
                << " capped_walks=" << capped << '\n';
            break;
        }
        }
        emit_rows(rows, config.format, out);
        return kExitOk;
    } catch (const SingularError& e) {
        err << "error: " << e.what() << '\n';
        return kExitSingular;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
}

namespace {

Graph bench_graph(int n) {
    if (n >= 4) return hub_path_graph(n);
    if (n == 3) {
        Graph g;
        g.n = 3;
        g.directed = false;
        g.out.resize(3);
        g.add_unit_edge(1, 0);
        g.add_unit_edge(1, 2);
        return g;
    }
    throw InvalidQueryError("bench: sizes must be >= 3");
}

std::pair<int, int> bench_terminals(int n) {
    if (n >= 4) return {hub_path_t(n), hub_path_p(n)};
    return {0, 2};
}

} // namespace

std::vector<BenchRow> bench_rows(const BenchConfig& config) {
    if (config.method != Method::recinvert && config.method != Method::powerseries)
        throw InvalidQueryError("bench: method must be recinvert or powerseries");
    std::vector<BenchRow> out;
    for (int n : config.sizes) {
        Graph g = bench_graph(n);
        auto [t, p] = bench_terminals(n);
        reset_op_counts();
        if (config.method == Method::recinvert)
            escape_via_recinvert(g, t, p, config.eps);
        else
            escape_via_powerseries(g, t, p, config.eps);
        OpCounts c = op_counts();
        BenchRow row;
        row.n = n;
        row.m = n - 2;
        row.adds = c.adds;
        row.muls = c.muls;
        row.divs = c.divs;
        row.total_ops = c.total();
        row.bit_work = c.bit_work;
        row.max_bits = c.max_bits;
        if (config.method == Method::recinvert)
            row.predicted_max_bits = schedule_max_bits(precision_schedule(n - 2, config.eps / 2));
        out.push_back(row);
    }
    return out;
}

int bench(const BenchConfig& config, std::ostream& out, std::ostream& err) {
    try {
        std::vector<BenchRow> rows = bench_rows(config);
        if (config.format == OutputFormat::tsv) {
            out << "n\tm\tadds\tmuls\tdivs\ttotal_ops\tbit_work\tmax_bits\tpredicted_max_bits\n";
            for (const BenchRow& r : rows)
                out << r.n << '\t' << r.m << '\t' << r.adds << '\t' << r.muls << '\t' << r.divs << '\t'
                    << r.total_ops << '\t' << r.bit_work << '\t' << r.max_bits << '\t'
                    << r.predicted_max_bits << '\n';
        } else {
            for (const BenchRow& r : rows) {
                nlohmann::json j;
                j["n"] = r.n;
                j["m"] = r.m;
                j["adds"] = r.adds;
                j["muls"] = r.muls;
                j["divs"] = r.divs;
                j["total_ops"] = r.total_ops;
                j["bit_work"] = r.bit_work;
                j["max_bits"] = r.max_bits;
                j["predicted_max_bits"] = r.predicted_max_bits;
                out << j.dump() << '\n';
            }
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
}

} // namespace escprob
