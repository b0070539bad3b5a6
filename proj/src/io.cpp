#include "kstab/io.hpp"

#include <sstream>

namespace kstab {

namespace {

using nlohmann::json;

void write_matrix_body(std::ostream& os, const SymMatrix& m) {
    os << "n " << m.dim() << "\n";
    os << "entries";
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) os << " " << format_rational(m.at(i, j));
    os << "\n";
    if (m.has_factor()) {
        os << "factor " << m.factor_rank();
        for (std::size_t i = 0; i < m.dim(); ++i)
            for (std::size_t r = 0; r < m.factor_rank(); ++r)
                os << " " << format_rational(m.factor().at(i, r));
        os << "\n";
    }
}

/// Whitespace token stream with a small amount of error context.
class TokenStream {
public:
    explicit TokenStream(const std::string& text) : in_(text) {}

    std::string next() {
        std::string t;
        if (!(in_ >> t)) throw ParseError("unexpected end of input");
        return t;
    }
    bool peek(const std::string& expect) {
        auto pos = in_.tellg();
        std::string t;
        if (!(in_ >> t)) return false;
        if (t == expect) return true;
        in_.seekg(pos);
        return false;
    }
    void expect(const std::string& key) {
        std::string t = next();
        if (t != key) throw ParseError("expected '" + key + "', found '" + t + "'");
    }
    std::size_t next_size() {
        std::string t = next();
        try {
            return std::stoul(t);
        } catch (const std::exception&) {
            throw ParseError("expected integer, found '" + t + "'");
        }
    }
    Rational next_rational() { return parse_rational(next()); }
    bool done() {
        auto pos = in_.tellg();
        std::string t;
        if (!(in_ >> t)) return true;
        in_.seekg(pos);
        return false;
    }

private:
    std::istringstream in_;
};

SymMatrix read_matrix_body(TokenStream& ts) {
    ts.expect("n");
    std::size_t n = ts.next_size();
    ts.expect("entries");
    RationalMatrix e(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e.at(i, j) = ts.next_rational();
    SymMatrix m(std::move(e));
    if (ts.peek("factor")) {
        std::size_t rank = ts.next_size();
        RationalMatrix v(n, rank);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t r = 0; r < rank; ++r) v.at(i, r) = ts.next_rational();
        m.attach_factor(std::move(v));
    }
    return m;
}

json rational_json(const Rational& q) {
    return json{{"rat", format_rational(q)}, {"float", to_double(q)}};
}

}  // namespace

std::string save_matrix(const SymMatrix& m) {
    std::ostringstream os;
    os << "matrix\n";
    write_matrix_body(os, m);
    return os.str();
}

SymMatrix load_matrix(const std::string& text) {
    TokenStream ts(text);
    ts.expect("matrix");
    SymMatrix m = read_matrix_body(ts);
    if (!ts.done()) throw ParseError("trailing tokens after matrix");
    return m;
}

std::string save_kernel(const Kernel& k) {
    std::ostringstream os;
    if (auto* pwc = dynamic_cast<const PiecewiseConstantKernel*>(&k)) {
        os << "kernel pwc\n";
        write_matrix_body(os, pwc->matrix());
    } else if (auto* trap = dynamic_cast<const TrapezoidKernel*>(&k)) {
        os << "kernel trapezoid\n";
        os << "epsilon " << format_rational(trap->epsilon()) << "\n";
        write_matrix_body(os, trap->matrix());
    } else if (auto* bd = dynamic_cast<const BlockDiagKernel*>(&k)) {
        if (!bd->block_count())
            throw std::invalid_argument("save_kernel: unbounded block-diagonal kernel");
        os << "kernel blockdiag\n";
        os << "blocks " << *bd->block_count() << "\n";
        for (std::size_t h = 1; h <= *bd->block_count(); ++h) {
            const TrapezoidKernel& b = bd->block(h);
            os << "offset " << format_rational(bd->layout(h).offset) << "\n";
            os << "epsilon " << format_rational(b.epsilon()) << "\n";
            write_matrix_body(os, b.matrix());
        }
    } else {
        throw std::invalid_argument("save_kernel: unknown kernel type");
    }
    return os.str();
}

std::unique_ptr<Kernel> load_kernel(const std::string& text) {
    TokenStream ts(text);
    ts.expect("kernel");
    std::string kind = ts.next();
    std::unique_ptr<Kernel> out;
    if (kind == "pwc") {
        out = std::make_unique<PiecewiseConstantKernel>(read_matrix_body(ts));
    } else if (kind == "trapezoid") {
        ts.expect("epsilon");
        Rational eps = ts.next_rational();
        out = std::make_unique<TrapezoidKernel>(read_matrix_body(ts), std::move(eps));
    } else if (kind == "blockdiag") {
        ts.expect("blocks");
        std::size_t count = ts.next_size();
        std::vector<std::shared_ptr<const TrapezoidKernel>> blocks;
        std::vector<Rational> offsets;
        for (std::size_t i = 0; i < count; ++i) {
            ts.expect("offset");
            offsets.push_back(ts.next_rational());
            ts.expect("epsilon");
            Rational eps = ts.next_rational();
            blocks.push_back(
                std::make_shared<const TrapezoidKernel>(read_matrix_body(ts), std::move(eps)));
        }
        out = std::make_unique<BlockDiagKernel>(std::move(blocks), std::move(offsets));
    } else {
        throw ParseError("unknown kernel kind '" + kind + "'");
    }
    if (!ts.done()) throw ParseError("trailing tokens after kernel");
    return out;
}

SymMatrix parse_inline_matrix(const std::string& text) {
    std::vector<std::vector<Rational>> rows;
    std::istringstream lines(text);
    std::string row;
    while (std::getline(lines, row, ';')) {
        std::vector<Rational> r;
        std::istringstream cells(row);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            // trim surrounding spaces
            auto b = cell.find_first_not_of(" \t");
            auto e = cell.find_last_not_of(" \t");
            if (b == std::string::npos) throw ParseError("empty matrix entry");
            r.push_back(parse_rational(cell.substr(b, e - b + 1)));
        }
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw ParseError("empty matrix");
    RationalMatrix e(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size())
            throw ParseError("matrix rows must all have length n");
        for (std::size_t j = 0; j < rows.size(); ++j) e.at(i, j) = rows[i][j];
    }
    return SymMatrix(std::move(e));
}

std::string save_input(const BoundedInput& u) {
    std::ostringstream os;
    os << "input\nbreakpoints";
    for (const auto& b : u.breakpoints()) os << " " << format_rational(b);
    os << "\nvalues";
    for (const auto& v : u.values()) os << " " << format_rational(v);
    os << "\n";
    return os.str();
}

BoundedInput load_input(const std::string& text) {
    TokenStream ts(text);
    ts.expect("input");
    ts.expect("breakpoints");
    std::vector<Rational> breaks;
    while (!ts.peek("values")) breaks.push_back(ts.next_rational());
    std::vector<Rational> values;
    while (!ts.done()) values.push_back(ts.next_rational());
    return BoundedInput(std::move(breaks), std::move(values));
}

json norm_report_json(const NormReport& r) {
    json ops = json::array();
    for (const auto& o : r.op_inf1) {
        json jo{{"value", rational_json(o.value)}, {"flavor", to_string(o.flavor)}};
        if (!o.witness.empty()) jo["witness"] = o.witness;
        ops.push_back(std::move(jo));
    }
    return json{{"schema", "1"}, {"l1", rational_json(r.l1)}, {"op_inf1", std::move(ops)}};
}

json verdict_json(const VerdictRecord& v) {
    return json{{"schema", "1"}, {"verdict", to_string(v.verdict)}, {"reason", v.reason}};
}

json counterexample_spec_json(const CounterexampleSpec& spec) {
    json blocks = json::array();
    for (const auto& b : spec.blocks) {
        blocks.push_back(json{
            {"h", b.h},
            {"n", b.n},
            {"epsilon", rational_json(b.epsilon)},
            {"offset", rational_json(b.offset)},
            {"scale", rational_json(b.cert.scale)},
            {"l1", rational_json(b.cert.l1)},
            {"op", json{{"value", rational_json(b.cert.op.value)},
                        {"flavor", to_string(b.cert.op.flavor)}}},
            {"op_bound", rational_json(b.op_bound)},
        });
    }
    json out{{"schema", "1"}, {"blocks", std::move(blocks)}};
    if (spec.h_max)
        out["h_max"] = *spec.h_max;
    else
        out["h_max"] = nullptr;
    return out;
}

std::string series_csv(const SeriesEvidence& ev) {
    std::ostringstream os;
    os << "H,l1_partial_sum,opnorm_upper_bound\n";
    for (const auto& row : ev.rows)
        os << row.h << "," << format_rational(row.l1_partial) << ","
           << format_rational(row.op_total_bound) << "\n";
    return os.str();
}

std::string operator_output_csv(const OperatorOutput& out) {
    std::ostringstream os;
    os << "x,value\n";
    for (std::size_t i = 0; i < out.grid.size(); ++i)
        os << format_rational(out.grid[i]) << "," << format_rational(out.values[i]) << "\n";
    return os.str();
}

std::string gram_csv(const GramSample& s) {
    std::ostringstream os;
    const std::size_t n = s.points.size();
    os << "point";
    for (std::size_t j = 0; j < n; ++j) os << "," << s.points[j];
    os << "\n";
    os.precision(17);
    for (std::size_t i = 0; i < n; ++i) {
        os << s.points[i];
        for (std::size_t j = 0; j < n; ++j) os << "," << s.gram[i * n + j];
        os << "\n";
    }
    return os.str();
}

}  // namespace kstab
