#include "mva/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "mva/error.hpp"
#include "mva/numfmt.hpp"

namespace mva {

namespace {

double column_b(double b_min, double b_max, std::size_t j, std::size_t count) {
    if (j + 1 == count) return b_max;
    return b_min + (b_max - b_min) * static_cast<double>(j) / static_cast<double>(count - 1);
}

struct ColumnOutcome {
    std::vector<double> roots;
    std::optional<std::string> error;
};

}  // namespace

ScanResult scan(const Problem& p, double b_min, double b_max, std::size_t b_count, int c_grid_n, double tol,
                unsigned threads) {
    if (!std::isfinite(b_min) || !std::isfinite(b_max) || !(p.a0() < b_min) || !(b_min < b_max)) {
        throw Error(ErrorKind::InvalidArgument, "scan needs a0 < b_min < b_max");
    }
    if (b_max > p.domain().hi) throw Error(ErrorKind::InvalidArgument, "b_max exceeds the domain");
    if (b_count < 2) throw Error(ErrorKind::InvalidArgument, "b_count must be at least 2");
    if (c_grid_n < 64) throw Error(ErrorKind::InvalidArgument, "c grid must have at least 64 points");

    std::vector<ColumnOutcome> columns(b_count);
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, b_count));

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](std::size_t first, std::size_t last) {
        try {
            for (std::size_t j = first; j < last; ++j) {
                const double b = column_b(b_min, b_max, j, b_count);
                try {
                    columns[j].roots = abscissae(p, b, tol, c_grid_n);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::DegenerateProblem) throw;
                    columns[j].error = e.what();
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    if (workers <= 1) {
        work(0, b_count);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (b_count + workers - 1) / workers;
        for (std::size_t first = 0; first < b_count; first += chunk) {
            pool.emplace_back(work, first, std::min(b_count, first + chunk));
        }
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    ScanResult r;
    r.expression = print(p.f());
    r.a0 = p.a0();
    r.domain = p.domain();
    r.b_min = b_min;
    r.b_max = b_max;
    r.b_count = b_count;
    r.c_grid_n = c_grid_n;
    r.tol = tol;
    for (std::size_t j = 0; j < b_count; ++j) {
        const double b = column_b(b_min, b_max, j, b_count);
        if (columns[j].error) r.column_errors.push_back(ColumnError{j, b, *columns[j].error});
        for (double c : columns[j].roots) {
            r.points.push_back(SolutionPoint{b, c, std::fabs(big_f_value(p, b, c))});
            r.column.push_back(j);
        }
    }
    return r;
}

Format format_from_string(std::string_view s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    if (s == "svg") return Format::Svg;
    throw Error(ErrorKind::UnknownFormat, "unknown format '" + std::string(s) + "' (expected csv, json or svg)");
}

std::string_view to_string(Format f) {
    switch (f) {
        case Format::Csv: return "csv";
        case Format::Json: return "json";
        case Format::Svg: return "svg";
    }
    return "csv";
}

// --- CSV -------------------------------------------------------------------

namespace {

constexpr std::string_view kCsvHeader = "b,c,residual,column";

void append_row(std::string& out, const SolutionPoint& pt, std::size_t column) {
    out += format_number(pt.b);
    out += ',';
    out += format_number(pt.c);
    out += ',';
    out += format_number(pt.residual);
    out += ',';
    out += std::to_string(column);
    out += '\n';
}

}  // namespace

std::string to_csv(const ScanResult& r) {
    std::string out(kCsvHeader);
    out += '\n';
    for (std::size_t i = 0; i < r.points.size(); ++i) append_row(out, r.points[i], r.column[i]);
    return out;
}

std::string to_csv(const Branch& br) {
    std::string out(kCsvHeader);
    out += '\n';
    for (std::size_t i = 0; i < br.points.size(); ++i) append_row(out, br.points[i], i);
    return out;
}

std::string write_csv(const std::vector<CsvRow>& rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const CsvRow& row : rows) append_row(out, row.point, row.column);
    return out;
}

std::vector<CsvRow> parse_csv(std::string_view text) {
    auto fail = [](std::size_t line, const std::string& why) {
        throw Error(ErrorKind::Syntax, "csv line " + std::to_string(line) + ": " + why);
    };
    if (text.empty() || text.back() != '\n') fail(1, "document must end with a single LF");
    std::vector<CsvRow> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line_no == 1) {
            if (line != kCsvHeader) fail(line_no, "unexpected header");
            continue;
        }
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 4) fail(line_no, "expected 4 fields");
        CsvRow row;
        try {
            row.point.b = parse_number(fields[0]);
            row.point.c = parse_number(fields[1]);
            row.point.residual = parse_number(fields[2]);
        } catch (const Error& e) {
            fail(line_no, e.what());
        }
        const std::string_view col = fields[3];
        if (col.empty() || !std::all_of(col.begin(), col.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
            fail(line_no, "column must be a non-negative integer");
        }
        row.column = std::stoull(std::string(col));
        rows.push_back(row);
    }
    if (line_no == 0) fail(1, "missing header");
    return rows;
}

// --- JSON ------------------------------------------------------------------

namespace {

nlohmann::ordered_json point_json(const SolutionPoint& pt) {
    return nlohmann::ordered_json{{"b", pt.b}, {"c", pt.c}, {"residual", pt.residual}};
}

}  // namespace

std::string to_json(const ScanResult& r) {
    nlohmann::ordered_json j;
    j["expression"] = r.expression;
    j["a0"] = r.a0;
    j["domain"] = {r.domain.lo, r.domain.hi};
    j["b_min"] = r.b_min;
    j["b_max"] = r.b_max;
    j["b_count"] = r.b_count;
    j["c_grid_n"] = r.c_grid_n;
    j["tol"] = r.tol;
    auto& pts = j["points"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        auto pj = point_json(r.points[i]);
        pj["column"] = r.column[i];
        pts.push_back(std::move(pj));
    }
    auto& errs = j["column_errors"] = nlohmann::ordered_json::array();
    for (const ColumnError& e : r.column_errors) {
        errs.push_back({{"column", e.column}, {"b", e.b}, {"message", e.message}});
    }
    return j.dump(2) + "\n";
}

std::string to_json(const Branch& br) {
    nlohmann::ordered_json j;
    j["parameter"] = to_string(br.parameter);
    j["seed_index"] = br.seed_index;
    j["seed_case"] = to_string(br.seed_case);
    j["stop_low"] = to_string(br.stop_low);
    j["stop_high"] = to_string(br.stop_high);
    auto& pts = j["points"] = nlohmann::ordered_json::array();
    for (const SolutionPoint& pt : br.points) pts.push_back(point_json(pt));
    return j.dump(2) + "\n";
}

// --- families --------------------------------------------------------------

std::vector<std::vector<std::size_t>> link_families(const ScanResult& r) {
    std::vector<std::vector<std::size_t>> families;
    if (r.points.empty()) return families;
    double c_lo = r.points.front().c;
    double c_hi = c_lo;
    for (const auto& pt : r.points) {
        c_lo = std::min(c_lo, pt.c);
        c_hi = std::max(c_hi, pt.c);
    }
    const double db = r.b_count > 1 ? (r.b_max - r.b_min) / static_cast<double>(r.b_count - 1) : 1.0;
    const double reach = std::max(0.02 * (c_hi - c_lo), 3.0 * db);

    std::vector<std::size_t> open;  // families whose tail sits in the previous column
    std::size_t i = 0;
    while (i < r.points.size()) {
        const std::size_t col = r.column[i];
        std::size_t end = i;
        while (end < r.points.size() && r.column[end] == col) ++end;

        struct Candidate {
            double distance;
            std::size_t point;
            std::size_t family;
        };
        std::vector<Candidate> cands;
        for (std::size_t f : open) {
            const auto& fam = families[f];
            const SolutionPoint& last = r.points[fam.back()];
            for (std::size_t k = i; k < end; ++k) {
                double predicted = last.c;
                if (fam.size() >= 2) {
                    const SolutionPoint& before = r.points[fam[fam.size() - 2]];
                    predicted += (last.c - before.c) / (last.b - before.b) * (r.points[k].b - last.b);
                }
                const double d = std::fabs(r.points[k].c - predicted);
                if (d <= reach) cands.push_back({d, k, f});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            if (a.distance != b.distance) return a.distance < b.distance;
            if (a.point != b.point) return a.point < b.point;
            return a.family < b.family;
        });
        std::vector<bool> point_used(end - i, false);
        std::vector<std::size_t> next_open;
        std::vector<bool> family_used(families.size(), false);
        for (const Candidate& cand : cands) {
            if (point_used[cand.point - i] || family_used[cand.family]) continue;
            point_used[cand.point - i] = true;
            family_used[cand.family] = true;
            families[cand.family].push_back(cand.point);
        }
        for (std::size_t k = i; k < end; ++k) {
            if (!point_used[k - i]) {
                families.push_back({k});
                family_used.push_back(true);
            }
        }
        for (std::size_t f = 0; f < families.size(); ++f) {
            if (family_used[f]) next_open.push_back(f);
        }
        open = std::move(next_open);
        i = end;
    }
    return families;
}

// --- SVG -------------------------------------------------------------------

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 40.0;

struct Frame {
    double b_lo, b_hi, c_lo, c_hi;

    double px(double b) const { return kMargin + (b - b_lo) / (b_hi - b_lo) * (kWidth - 2 * kMargin); }
    double py(double c) const { return kHeight - kMargin - (c - c_lo) / (c_hi - c_lo) * (kHeight - 2 * kMargin); }
};

Frame frame_for(double b_lo, double b_hi, double c_lo, double c_hi) {
    auto pad = [](double& lo, double& hi) {
        double span = hi - lo;
        if (!(span > 0.0)) span = std::max(1.0, std::fabs(lo));
        if (hi - lo <= 0.0) {
            lo -= 0.5 * span;
            hi += 0.5 * span;
        }
        lo -= 0.05 * span;
        hi += 0.05 * span;
    };
    pad(b_lo, b_hi);
    pad(c_lo, c_hi);
    return Frame{b_lo, b_hi, c_lo, c_hi};
}

std::string coord(double v) {
    // Pixel coordinates at 1e-3 px; fixed width keeps output deterministic.
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// Window clipped to the half-plane c >= b.
std::vector<std::pair<double, double>> shaded_region(const Frame& fr) {
    const std::vector<std::pair<double, double>> box = {
        {fr.b_lo, fr.c_lo}, {fr.b_hi, fr.c_lo}, {fr.b_hi, fr.c_hi}, {fr.b_lo, fr.c_hi}};
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < box.size(); ++i) {
        const auto& a = box[i];
        const auto& b = box[(i + 1) % box.size()];
        const double da = a.second - a.first;
        const double dbv = b.second - b.first;
        if (da >= 0.0) out.push_back(a);
        if ((da >= 0.0) != (dbv >= 0.0)) {
            const double t = da / (da - dbv);
            out.emplace_back(a.first + t * (b.first - a.first), a.second + t * (b.second - a.second));
        }
    }
    return out;
}

std::string svg_document(const Frame& fr, const std::vector<SolutionPoint>& pts,
                         const std::vector<std::vector<std::size_t>>& families, const std::string& title) {
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
    s += "<title>";
    for (char ch : title) {
        switch (ch) {
            case '<': s += "&lt;"; break;
            case '>': s += "&gt;"; break;
            case '&': s += "&amp;"; break;
            default: s += ch;
        }
    }
    s += "</title>\n";
    s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

    s += "<polygon class=\"excluded\" fill=\"#cccccc\" fill-opacity=\"0.5\" stroke=\"none\" points=\"";
    bool first = true;
    for (const auto& [b, c] : shaded_region(fr)) {
        if (!first) s += ' ';
        first = false;
        s += coord(fr.px(b)) + "," + coord(fr.py(c));
    }
    s += "\"/>\n";

    const std::string x0 = coord(kMargin), x1 = coord(kWidth - kMargin);
    const std::string y0 = coord(kHeight - kMargin), y1 = coord(kMargin);
    s += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    s += "<line x1=\"" + x0 + "\" y1=\"" + y0 + "\" x2=\"" + x1 + "\" y2=\"" + y0 + "\"/>\n";
    s += "<line x1=\"" + x0 + "\" y1=\"" + y0 + "\" x2=\"" + x0 + "\" y2=\"" + y1 + "\"/>\n";
    s += "</g>\n";
    s += "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    s += "<text x=\"" + x0 + "\" y=\"" + coord(kHeight - kMargin + 16) + "\">" + format_number(fr.b_lo) + "</text>\n";
    s += "<text x=\"" + x1 + "\" y=\"" + coord(kHeight - kMargin + 16) + "\" text-anchor=\"end\">" +
         format_number(fr.b_hi) + "</text>\n";
    s += "<text x=\"" + coord(kWidth / 2) + "\" y=\"" + coord(kHeight - 8) + "\" text-anchor=\"middle\">b</text>\n";
    s += "<text x=\"" + coord(kMargin - 4) + "\" y=\"" + y0 + "\" text-anchor=\"end\">" + format_number(fr.c_lo) +
         "</text>\n";
    s += "<text x=\"" + coord(kMargin - 4) + "\" y=\"" + coord(kMargin + 12) + "\" text-anchor=\"end\">" +
         format_number(fr.c_hi) + "</text>\n";
    s += "<text x=\"12\" y=\"" + coord(kHeight / 2) + "\">c</text>\n";
    s += "</g>\n";

    for (const auto& fam : families) {
        if (fam.size() < 2) continue;
        s += "<polyline class=\"family\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
        for (std::size_t k = 0; k < fam.size(); ++k) {
            if (k) s += ' ';
            s += coord(fr.px(pts[fam[k]].b)) + "," + coord(fr.py(pts[fam[k]].c));
        }
        s += "\"/>\n";
    }
    s += "<g class=\"points\" fill=\"black\">\n";
    for (const SolutionPoint& pt : pts) {
        s += "<circle cx=\"" + coord(fr.px(pt.b)) + "\" cy=\"" + coord(fr.py(pt.c)) + "\" r=\"1.5\"/>\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

template <class Points>
std::pair<double, double> c_bounds(const Points& pts, double fallback_lo, double fallback_hi) {
    if (pts.empty()) return {fallback_lo, fallback_hi};
    double lo = pts.front().c, hi = lo;
    for (const auto& pt : pts) {
        lo = std::min(lo, pt.c);
        hi = std::max(hi, pt.c);
    }
    return {lo, hi};
}

}  // namespace

std::string to_svg(const ScanResult& r) {
    const auto [c_lo, c_hi] = c_bounds(r.points, r.a0, r.b_max);
    const Frame fr = frame_for(r.b_min, r.b_max, c_lo, c_hi);
    return svg_document(fr, r.points, link_families(r), r.expression);
}

std::string to_svg(const Branch& br) {
    double b_lo = 0.0, b_hi = 1.0;
    if (!br.points.empty()) {
        b_lo = b_hi = br.points.front().b;
        for (const auto& pt : br.points) {
            b_lo = std::min(b_lo, pt.b);
            b_hi = std::max(b_hi, pt.b);
        }
    }
    const auto [c_lo, c_hi] = c_bounds(br.points, 0.0, 1.0);
    const Frame fr = frame_for(b_lo, b_hi, c_lo, c_hi);
    std::vector<std::size_t> all(br.points.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return svg_document(fr, br.points, {all}, std::string(to_string(br.parameter)));
}

std::string render(const ScanResult& r, Format f) {
    switch (f) {
        case Format::Csv: return to_csv(r);
        case Format::Json: return to_json(r);
        case Format::Svg: return to_svg(r);
    }
    throw Error(ErrorKind::UnknownFormat, "unknown format");
}

std::string render(const Branch& br, Format f) {
    switch (f) {
        case Format::Csv: return to_csv(br);
        case Format::Json: return to_json(br);
        case Format::Svg: return to_svg(br);
    }
    throw Error(ErrorKind::UnknownFormat, "unknown format");
}

namespace {

void write_file(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

}  // namespace

void emit(const ScanResult& r, Format f, const std::filesystem::path& path) { write_file(render(r, f), path); }
void emit(const Branch& br, Format f, const std::filesystem::path& path) { write_file(render(br, f), path); }

}  // namespace mva
