#include "holoquench/output.hpp"

#include "holoquench/config.hpp"
#include "holoquench/errors.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace holo {

namespace fs = std::filesystem;

namespace {

std::string g17(double v) { return std::isnan(v) ? std::string("nan") : fmt::format("{:.17g}", v); }

std::string curve_header(const CurveMetadata &m, std::string_view model, std::size_t sites) {
    return fmt::format("# model={} mu={} sites={} graph={} t={} alpha={} offsets={} kind={}\n", model, g17(m.mu),
                       sites, m.graph, g17(m.t), g17(m.alpha), to_string(m.offsets), m.kind);
}

std::string wedge_name(WedgeSide s) {
    switch(s) {
        case WedgeSide::inside: return "inside";
        case WedgeSide::on_surface: return "on_surface";
        case WedgeSide::outside: return "outside";
    }
    return "outside";
}

std::string power_law_record(const std::string &label, const PowerLawOutcome &o) {
    if(o.fit) return "[" + label + "]\n" + fit_record(*o.fit);
    return "[" + label + "]\nfailure = " + o.failure + "\n";
}

std::string utc_timestamp() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm    tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class Writer {
  public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if(ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory '" + dir_.string() + "'");
    }

    void put(const std::string &name, const std::string &content) {
        std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
        if(!out) throw IoError("cannot write '" + (dir_ / name).string() + "'");
        out << content;
        out.close();
        if(!out) throw IoError("failed writing '" + (dir_ / name).string() + "'");
        files_.push_back({name, sha256_hex(content)});
    }

    const std::vector<ManifestFile> &files() const { return files_; }
    const fs::path                  &dir() const { return dir_; }

  private:
    fs::path                  dir_;
    std::vector<ManifestFile> files_;
};

std::vector<std::string> csv_split(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream        ss(line);
    for(std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
    return out;
}

struct Table {
    std::map<std::string, std::string> meta;
    std::vector<std::string>           columns;
    std::vector<std::vector<double>>   rows;
};

Table read_table(const fs::path &path) {
    std::ifstream in(path);
    if(!in) throw IoError("cannot open '" + path.string() + "'");
    Table       t;
    std::string line;
    int         lineno = 0;
    while(std::getline(in, line)) {
        ++lineno;
        if(line.empty()) continue;
        if(line[0] == '#') {
            std::istringstream ss(line.substr(1));
            for(std::string kv; ss >> kv;) {
                const auto eq = kv.find('=');
                if(eq != std::string::npos) t.meta[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            continue;
        }
        const auto cells = csv_split(line);
        if(t.columns.empty()) {
            t.columns = cells;
            continue;
        }
        if(cells.size() != t.columns.size())
            throw IoError(path.string() + " line " + std::to_string(lineno) + ": wrong number of columns");
        std::vector<double> row;
        for(const auto &c : cells) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(c, &used));
                if(used != c.size()) throw std::invalid_argument(c);
            } catch(const std::exception &) {
                throw IoError(path.string() + " line " + std::to_string(lineno) + ": bad number '" + c + "'");
            }
        }
        t.rows.push_back(std::move(row));
    }
    if(t.columns.empty()) throw IoError(path.string() + ": no column header");
    return t;
}

std::size_t column_index(const Table &t, const std::string &name, const fs::path &path) {
    for(std::size_t i = 0; i < t.columns.size(); ++i)
        if(t.columns[i] == name) return i;
    throw IoError(path.string() + ": no column '" + name + "'");
}

std::size_t sites_of(const Table &t) {
    const auto it = t.meta.find("sites");
    if(it == t.meta.end()) return 0;
    try {
        return std::stoul(it->second);
    } catch(const std::exception &) {
        return 0;
    }
}

} // namespace

std::string sha256_hex(const std::string &bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int  len = 0;
    if(EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 computation failed");
    std::string hex;
    for(unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::string sha256_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if(!in) throw IoError("cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

std::string entropy_curve_csv(const EntropyCurve &curve, ModelId model) {
    std::string out = curve_header(curve.meta, to_string(model), curve.ring_size) + "ell,S\n";
    for(std::size_t i = 0; i < curve.ell.size(); ++i) out += g17(curve.ell[i]) + "," + g17(curve.entropy[i]) + "\n";
    return out;
}

std::string correlation_csv(const CorrelationScanResult &scan) {
    std::string out = curve_header(scan.x.meta, "power_law", scan.x.ring_size) + "d,cov_x,cov_p,corr_x,corr_p,mi\n";
    for(std::size_t i = 0; i < scan.x.separation.size(); ++i)
        out += fmt::format("{},{},{},{},{},{}\n", g17(scan.x.separation[i]), g17(scan.x.covariance[i]),
                           g17(scan.p.covariance[i]), g17(scan.x.correlation[i]), g17(scan.p.correlation[i]),
                           g17(scan.mi.covariance[i]));
    return out;
}

std::string fit_record(const FitResult &fit) {
    std::string out = fmt::format("model = {}\n", to_string(fit.model));
    for(const auto &p : fit.params) out += fmt::format("{} = {}\n{}_std_error = {}\n", p.name, g17(p.value), p.name, g17(p.std_error));
    out += fmt::format("residual_norm = {}\nrms_residual = {}\npoints = {}\niterations = {}\n", g17(fit.residual_norm),
                       g17(fit.rms()), fit.domain.size(), fit.iterations);
    std::string dom;
    for(std::size_t i = 0; i < fit.domain.size(); ++i) dom += (i ? " " : "") + g17(fit.domain[i]);
    out += "domain = " + dom + "\n";
    out += "std_error_method = residual variance times diagonal of inverse normal matrix\n";
    return out;
}

RunManifest write_outputs(const RunResult &r, const fs::path &dir) {
    Writer w(dir);
    const auto &cfg = r.config;

    w.put("graph.txt", edge_list_string(r.graph));

    if(r.entropy) {
        const auto &e = *r.entropy;
        w.put("entropy.csv", entropy_curve_csv(e.curve, e.fit.model));
        if(e.two_sided) w.put("entropy_two_sided.csv", entropy_curve_csv(*e.two_sided, ModelId::btz_two_sided));
        std::string rec = fit_record(e.fit);
        rec += "full_boundary_entropy = " + g17(e.full_boundary_entropy) + "\n";
        if(e.predicted_crossover) rec += "predicted_crossover = " + g17(*e.predicted_crossover) + "\n";
        if(e.empirical_crossover) rec += "empirical_crossover = " + g17(*e.empirical_crossover) + "\n";
        if(e.plateau_flatness) rec += "plateau_flatness = " + g17(*e.plateau_flatness) + "\n";
        w.put("fit.txt", rec);
    }
    if(r.renyi) {
        const auto &t   = *r.renyi;
        std::string out = fmt::format("# model=renyi graph={} ell={} t={} offsets={}\nmu,alpha,ratio,cft_ratio\n",
                                      r.graph.descriptor(), t.ell, g17(cfg.t), to_string(cfg.offsets));
        for(std::size_t m = 0; m < t.mus.size(); ++m)
            for(std::size_t a = 0; a < t.alphas.size(); ++a)
                out += fmt::format("{},{},{},{}\n", g17(t.mus[m]), g17(t.alphas[a]), g17(t.ratio[m][a]),
                                   g17(t.cft_reference[a]));
        w.put("renyi.csv", out);
    }
    if(r.squeeze) {
        const auto &s   = *r.squeeze;
        const auto  c_or_nan = [](const FitResult &f, const char *k) {
            for(const auto &p : f.params)
                if(p.name == k) return std::pair{p.value, p.std_error};
            return std::pair{std::nan(""), std::nan("")};
        };
        std::string out = fmt::format("# model={} graph={} t={} offsets={}\nmu,c,c_err,eps,eps_err\n",
                                      s.fits.empty() ? "none" : to_string(s.fits.front().model), r.graph.descriptor(),
                                      g17(cfg.t), to_string(cfg.offsets));
        for(std::size_t i = 0; i < s.mus.size(); ++i) {
            const auto [c, ce] = c_or_nan(s.fits[i], "c");
            const auto [e, ee] = c_or_nan(s.fits[i], "eps");
            out += fmt::format("{},{},{},{},{}\n", g17(s.mus[i]), g17(c), g17(ce), g17(e), g17(ee));
        }
        w.put("squeeze.csv", out);
        std::string rec;
        if(s.log_fit)
            rec = fmt::format("model = log_inverse_mu\na = {}\na_std_error = {}\nb = {}\nb_std_error = {}\npoints = {}\n",
                              g17(s.log_fit->a), g17(s.log_fit->a_err), g17(s.log_fit->b), g17(s.log_fit->b_err),
                              s.log_fit->points);
        else
            rec = "model = none\n";
        w.put("fit.txt", rec);
    }
    if(r.correlation) {
        const auto &c = *r.correlation;
        w.put("correlations.csv", correlation_csv(c));
        w.put("fit.txt", power_law_record("cov_x", c.fit_x) + power_law_record("cov_p", c.fit_p) +
                             power_law_record("mi", c.fit_mi));
    }
    if(r.mi) {
        const auto &m   = *r.mi;
        std::string out = curve_header(m.mi.meta, "power_law", m.mi.ring_size) + "d,mi\n";
        for(std::size_t i = 0; i < m.mi.separation.size(); ++i)
            out += g17(m.mi.separation[i]) + "," + g17(m.mi.covariance[i]) + "\n";
        w.put("mi.csv", out);
        std::string b = "# model=mi_bound graph=" + r.graph.descriptor() + " mu=" + g17(cfg.mu) +
                        "\ni,j,mi,corr2_x,corr2_p,one_minus_exp,two_i,ok_x,ok_p\n";
        for(const auto &e : m.bounds)
            b += fmt::format("{},{},{},{},{},{},{},{},{}\n", e.i, e.j, g17(e.report.mutual_information),
                             g17(e.report.corr_sq_x), g17(e.report.corr_sq_p), g17(e.report.one_minus_exp),
                             g17(e.report.two_i), e.report.satisfied_x ? 1 : 0, e.report.satisfied_p ? 1 : 0);
        w.put("mi_bounds.csv", b);
        w.put("fit.txt", power_law_record("mi", m.fit_mi));
    }
    if(r.probe) {
        for(const auto &map : r.probe->maps) {
            std::string out = fmt::format("# model=probe_map region={} mu={} graph={} t={}\n"
                                          "node_id,R,theta,px,py,norm_mi\n",
                                          map.name, g17(cfg.mu), r.graph.descriptor(), g17(cfg.t));
            for(const auto &e : map.entries)
                out += fmt::format("{},{},{},{},{},{}\n", e.node, g17(e.coords.depth), g17(e.coords.theta),
                                   g17(e.point.x), g17(e.point.y), g17(e.normalized_mi.value_or(std::nan(""))));
            const std::string stem = map.name.find(':') == std::string::npos ? map.name : "custom" + std::to_string(&map - r.probe->maps.data());
            w.put("probe_" + stem + ".csv", out);

            std::string arcs = fmt::format("# model=rt_arcs region={} minimal={}\ncandidate,arc,x,y\n", map.name,
                                           map.arcs.connected_minimal ? "connected" : "disconnected");
            auto emit = [&](const char *cand, const std::vector<GeodesicArc> &list) {
                for(std::size_t a = 0; a < list.size(); ++a)
                    for(const auto &p : list[a].polyline())
                        arcs += fmt::format("{},{},{},{}\n", cand, a, g17(p.x), g17(p.y));
            };
            emit("disconnected", map.arcs.disconnected);
            if(map.region.intervals.size() == 2) emit("connected", map.arcs.connected);
            w.put("arcs_" + stem + ".csv", arcs);

            std::string wedge = "node_id,wedge\n";
            for(const auto &e : map.entries) wedge += fmt::format("{},{}\n", e.node, wedge_name(e.wedge));
            w.put("wedge_" + stem + ".csv", wedge);
        }
    }
    if(r.samples) {
        std::string out = fmt::format("# model=samples seed={}\nnode_id,p_outcome\n", r.samples->seed);
        for(std::size_t i = 0; i < r.samples->measured_modes.size(); ++i)
            out += fmt::format("{},{}\n", r.samples->measured_modes[i], g17(r.samples->outcomes(static_cast<Eigen::Index>(i))));
        w.put("samples.csv", out);
    }

    RunManifest m;
    m.config_echo = config_echo(cfg);
    m.version     = kToolVersion;
    m.timestamp   = utc_timestamp();
    m.files       = w.files();

    std::string text = "tool = holoquench\nversion = " + m.version + "\ntimestamp = " + m.timestamp + "\n[config]\n" +
                       m.config_echo + "[files]\n";
    for(const auto &f : m.files) text += f.sha256 + "  " + f.name + "\n";
    std::ofstream out(w.dir() / "manifest.txt", std::ios::binary | std::ios::trunc);
    if(!(out << text)) throw IoError("cannot write manifest in '" + w.dir().string() + "'");
    return m;
}

EntropyCurve read_entropy_curve(const fs::path &path) {
    const auto   t  = read_table(path);
    const auto   il = column_index(t, "ell", path), is = column_index(t, "S", path);
    EntropyCurve c;
    for(const auto &row : t.rows) {
        c.ell.push_back(row[il]);
        c.entropy.push_back(row[is]);
    }
    c.ring_size = sites_of(t);
    if(auto it = t.meta.find("graph"); it != t.meta.end()) c.meta.graph = it->second;
    if(auto it = t.meta.find("kind"); it != t.meta.end()) c.meta.kind = it->second;
    return c;
}

CorrelationCurve read_correlation_column(const fs::path &path, const std::string &column) {
    const auto       t  = read_table(path);
    const auto       id = column_index(t, "d", path), iv = column_index(t, column, path);
    CorrelationCurve c;
    for(const auto &row : t.rows) {
        c.separation.push_back(row[id]);
        c.covariance.push_back(row[iv]);
        c.correlation.push_back(row[iv]);
    }
    c.ring_size = sites_of(t);
    return c;
}

} // namespace holo
