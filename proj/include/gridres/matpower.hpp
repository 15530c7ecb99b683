// Parser for the MATPOWER case-file subset used here: the mpc.baseMVA
// scalar and the mpc.bus / mpc.gen / mpc.branch matrix blocks. '%' comments
// are stripped, whitespace is free-form, matrix rows end with ';' and a
// block closes with ']'. Only the columns this model consumes are read;
// trailing columns are tolerated, missing ones are an error.
#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gridres/errors.hpp"
#include "gridres/grid.hpp"

namespace gridres {
namespace detail {

struct MatrixBlock {
    std::vector<std::vector<double>> rows;
    std::vector<int> row_lines;  // source line of each row, for diagnostics
};

class MatpowerScanner {
public:
    MatpowerScanner(std::string_view text, std::string source)
        : text_(text), source_(std::move(source)) {}

    // Scans the whole file, collecting "mpc.<name> = <scalar>;" and
    // "mpc.<name> = [ rows ];" assignments.
    void scan() {
        while (!eof()) {
            skip_ws_and_comments();
            if (eof()) break;
            if (!match_identifier_prefix()) {
                advance_line();
                continue;
            }
            const int decl_line = line_;
            std::string name = read_field_name();
            skip_ws_and_comments();
            if (!consume('=')) {
                // "function mpc = case30" and similar; skip the rest of the line
                advance_line();
                continue;
            }
            skip_ws_and_comments();
            if (peek() == '[') {
                matrices_[name] = read_matrix(name, decl_line);
            } else if (peek() == '\'' || peek() == '"') {
                advance_line();  // string assignment (e.g. a version tag); ignored
            } else {
                scalars_[name] = read_scalar(name);
            }
        }
    }

    const MatrixBlock* matrix(const std::string& name) const {
        auto it = matrices_.find(name);
        return it == matrices_.end() ? nullptr : &it->second;
    }
    const double* scalar(const std::string& name) const {
        auto it = scalars_.find(name);
        return it == scalars_.end() ? nullptr : &it->second;
    }

private:
    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return eof() ? '\0' : text_[pos_]; }
    char get() {
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }
    bool consume(char c) {
        if (peek() != c) return false;
        get();
        return true;
    }
    void advance_line() {
        while (!eof() && get() != '\n') {}
    }
    void skip_ws_and_comments() {
        while (!eof()) {
            if (std::isspace(static_cast<unsigned char>(peek()))) {
                get();
            } else if (peek() == '%') {
                advance_line();
            } else {
                break;
            }
        }
    }

    // True when the cursor sits on "mpc." — consumed on success.
    bool match_identifier_prefix() {
        if (text_.substr(pos_, 4) == "mpc.") {
            pos_ += 4;
            return true;
        }
        return false;
    }

    std::string read_field_name() {
        std::string name;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            name.push_back(get());
        return name;
    }

    double read_number(const std::string& context) {
        skip_ws_and_comments();
        const std::size_t start = pos_;
        const int at_line = line_;
        while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ';' &&
               peek() != ']' && peek() != ',' && peek() != '%')
            get();
        const std::string_view tok = text_.substr(start, pos_ - start);
        if (tok.empty()) throw ParseError(source_, at_line, "expected a number in " + context);
        double value = 0.0;
        const char* end = tok.data() + tok.size();
        auto [ptr, ec] = std::from_chars(tok.data(), end, value);
        if (ec != std::errc() || ptr != end)
            throw ParseError(source_, at_line,
                             "non-numeric field '" + std::string(tok) + "' in " + context);
        return value;
    }

    double read_scalar(const std::string& name) {
        const double v = read_number("mpc." + name);
        skip_ws_and_comments();
        if (!consume(';')) throw ParseError(source_, line_, "expected ';' after mpc." + name);
        return v;
    }

    MatrixBlock read_matrix(const std::string& name, int decl_line) {
        get();  // consume '['
        MatrixBlock block;
        std::vector<double> row;
        int row_line = line_;
        while (true) {
            skip_ws_and_comments();
            if (eof())
                throw ParseError(source_, decl_line, "unterminated matrix block mpc." + name);
            const char c = peek();
            if (c == ']') {
                get();
                skip_ws_and_comments();
                if (!consume(';'))
                    throw ParseError(source_, line_, "expected ';' after ']' closing mpc." + name);
                if (!row.empty()) {  // final row without trailing ';'
                    block.rows.push_back(std::move(row));
                    block.row_lines.push_back(row_line);
                }
                return block;
            }
            if (c == ';') {
                get();
                if (row.empty())
                    throw ParseError(source_, line_, "empty row in mpc." + name);
                block.rows.push_back(std::move(row));
                block.row_lines.push_back(row_line);
                row.clear();
                continue;
            }
            if (c == ',') {
                get();
                continue;
            }
            if (c == '[')
                throw ParseError(source_, line_, "unexpected '[' inside mpc." + name);
            if (row.empty()) row_line = line_;
            row.push_back(read_number("mpc." + name));
        }
    }

    std::string_view text_;
    std::string source_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::map<std::string, MatrixBlock> matrices_;
    std::map<std::string, double> scalars_;
};

inline const MatrixBlock& require_block(const MatpowerScanner& sc, const std::string& name,
                                        const std::string& source) {
    const MatrixBlock* b = sc.matrix(name);
    if (!b) throw ParseError(source, 1, "missing required matrix block mpc." + name);
    return *b;
}

inline void require_columns(const MatrixBlock& block, std::size_t need, const std::string& name,
                            const std::string& source) {
    for (std::size_t r = 0; r < block.rows.size(); ++r)
        if (block.rows[r].size() < need)
            throw ParseError(source, block.row_lines[r],
                             "mpc." + name + " row has " + std::to_string(block.rows[r].size()) +
                                 " columns, need at least " + std::to_string(need));
}

}  // namespace detail

// When a branch carries rateA = 0 (unlimited in the source format), the
// flow cap becomes this multiple of total system load: finite, never binding.
inline constexpr double kUnlimitedRateFactor = 10.0;

inline GridCase parse_matpower_case(std::string_view text, const std::string& source = "case") {
    detail::MatpowerScanner sc(text, source);
    sc.scan();

    const detail::MatrixBlock& bus = detail::require_block(sc, "bus", source);
    const detail::MatrixBlock& gen = detail::require_block(sc, "gen", source);
    const detail::MatrixBlock& branch = detail::require_block(sc, "branch", source);
    detail::require_columns(bus, 3, "bus", source);       // bus_i, type, Pd
    detail::require_columns(gen, 10, "gen", source);      // bus .. Pmax(9) Pmin(10)
    detail::require_columns(branch, 6, "branch", source); // fbus, tbus, r, x, b, rateA

    GridCase grid;
    if (const double* base = sc.scalar("baseMVA")) grid.base_mva = *base;

    for (std::size_t r = 0; r < bus.rows.size(); ++r) {
        Bus b;
        b.id = static_cast<int>(bus.rows[r][0]);
        b.base_load = bus.rows[r][2];
        if (b.base_load < 0.0)
            throw ParseError(source, bus.row_lines[r], "negative load at bus " + std::to_string(b.id));
        grid.buses.push_back(b);
    }

    double total_load = grid.total_base_load();
    const double unlimited_cap = kUnlimitedRateFactor * (total_load > 0.0 ? total_load : 1.0);

    for (std::size_t r = 0; r < gen.rows.size(); ++r) {
        Generator g;
        g.id = static_cast<int>(r) + 1;
        g.bus = static_cast<int>(gen.rows[r][0]);
        g.p_max = gen.rows[r][8];
        g.p_min = gen.rows[r][9];
        if (grid.bus_index(g.bus) < 0)
            throw ValidationError("generator row " + std::to_string(r + 1) +
                                  " references unknown bus " + std::to_string(g.bus));
        grid.generators.push_back(g);
    }

    for (std::size_t r = 0; r < branch.rows.size(); ++r) {
        Line l;
        l.id = static_cast<int>(r) + 1;
        l.from_bus = static_cast<int>(branch.rows[r][0]);
        l.to_bus = static_cast<int>(branch.rows[r][1]);
        l.reactance = branch.rows[r][3];
        const double rate_a = branch.rows[r][5];
        if (grid.bus_index(l.from_bus) < 0)
            throw ValidationError("branch row " + std::to_string(r + 1) +
                                  " references unknown bus " + std::to_string(l.from_bus));
        if (grid.bus_index(l.to_bus) < 0)
            throw ValidationError("branch row " + std::to_string(r + 1) +
                                  " references unknown bus " + std::to_string(l.to_bus));
        if (!(l.reactance > 0.0))
            throw ParseError(source, branch.row_lines[r],
                             "branch row " + std::to_string(r + 1) + " needs reactance > 0");
        if (rate_a < 0.0)
            throw ParseError(source, branch.row_lines[r],
                             "branch row " + std::to_string(r + 1) + " has negative rateA");
        l.pl_max = rate_a == 0.0 ? unlimited_cap : rate_a;
        grid.lines.push_back(l);
    }

    grid.validate();
    return grid;
}

}  // namespace gridres
