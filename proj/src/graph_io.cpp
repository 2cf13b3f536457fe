#include "holoquench/errors.hpp"
#include "holoquench/graph.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

namespace holo {

namespace {

std::string fmt_double(double v) { return std::isnan(v) ? std::string("nan") : fmt::format("{:.17g}", v); }

[[noreturn]] void bad_line(int line, const std::string &what) {
    throw IoError("edge list line " + std::to_string(line) + ": " + what);
}

template <class T> T parse_number(const std::string &tok, int line) {
    T    value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if(ec != std::errc() || ptr != tok.data() + tok.size()) bad_line(line, "cannot parse '" + tok + "'");
    return value;
}

std::vector<std::string> tokens(const std::string &s) {
    std::istringstream       in(s);
    std::vector<std::string> out;
    for(std::string t; in >> t;) out.push_back(t);
    return out;
}

} // namespace

void write_edge_list(std::ostream &out, const CouplingGraph &graph) {
    out << "nodes " << graph.num_nodes() << '\n';
    for(const auto &n : graph.nodes()) {
        const double r  = n.coords ? n.coords->depth : std::nan("");
        const double th = n.coords ? n.coords->theta : std::nan("");
        out << n.id << ' ' << to_string(n.role) << ' ' << fmt_double(r) << ' ' << fmt_double(th) << '\n';
    }
    for(const auto &e : graph.edges()) out << e.a << ' ' << e.b << ' ' << e.weight << '\n';
    if(!out) throw IoError("failed writing edge list");
}

std::string edge_list_string(const CouplingGraph &graph) {
    std::ostringstream s;
    write_edge_list(s, graph);
    return s.str();
}

// Rings are not part of the format; all boundary nodes come back as one ring in id order.
CouplingGraph read_edge_list(std::istream &in) {
    CouplingGraph g;
    std::string   line;
    int           lineno = 0;
    std::size_t   count  = 0;
    bool          header = false;

    while(std::getline(in, line)) {
        ++lineno;
        const auto tok = tokens(line);
        if(tok.empty()) continue;
        if(!header) {
            if(tok.size() != 2 || tok[0] != "nodes") bad_line(lineno, "expected 'nodes <count>'");
            count  = parse_number<std::size_t>(tok[1], lineno);
            header = true;
            continue;
        }
        try {
            if(g.num_nodes() < count) {
                if(tok.size() != 4) bad_line(lineno, "expected 'id role R theta'");
                if(parse_number<std::size_t>(tok[0], lineno) != g.num_nodes()) bad_line(lineno, "node ids must be 0..N-1 in order");
                const ModeRole role = parse_mode_role(tok[1]);
                const bool     nan  = tok[2] == "nan" || tok[3] == "nan";
                std::optional<DiskCoordinates> c;
                if(!nan) c = DiskCoordinates{parse_number<double>(tok[2], lineno), parse_number<double>(tok[3], lineno)};
                g.add_node(role, c);
            } else {
                if(tok.size() != 3) bad_line(lineno, "expected 'a b weight'");
                g.add_edge(parse_number<std::size_t>(tok[0], lineno), parse_number<std::size_t>(tok[1], lineno),
                           parse_number<int>(tok[2], lineno));
            }
        } catch(const std::invalid_argument &e) {
            bad_line(lineno, e.what());
        }
    }
    if(!header) throw IoError("edge list is empty");
    if(g.num_nodes() != count) throw IoError("edge list truncated: fewer node lines than declared");
    g.set_boundary_rings({g.nodes_with_role(ModeRole::boundary)});
    g.set_descriptor("edge_list");
    return g;
}

} // namespace holo
