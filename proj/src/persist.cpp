#include "persist.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "errors.hpp"
#include "textio.hpp"

namespace idob {

namespace {

std::vector<std::vector<double>*> columns(FlightLog& L) {
    return {&L.t, &L.x, &L.y, &L.z, &L.vx, &L.vy, &L.vz, &L.u1, &L.u2, &L.u3, &L.u4,
            &L.d, &L.d_hat, &L.d_f, &L.e, &L.e_p};
}

}  // namespace

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> c = {"t",  "x",  "y",  "z",  "vx", "vy", "vz", "u1",
                                               "u2", "u3", "u4", "d", "d_hat", "d_f", "e", "e_p"};
    return c;
}

void export_csv(const FlightLog& log, const std::string& path) {
    FlightLog copy = log;
    const auto cols = columns(copy);
    std::string s;
    for (std::size_t j = 0; j < csv_columns().size(); ++j) s += (j ? "," : "") + csv_columns()[j];
    s += "\n";
    for (std::size_t k = 0; k < log.size(); ++k) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (j) s += ',';
            s += format_double((*cols[j])[k]);
        }
        s += '\n';
    }
    write_text_file(path, s);
}

FlightLog import_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    std::getline(in, line);
    std::string expect;
    for (std::size_t j = 0; j < csv_columns().size(); ++j) expect += (j ? "," : "") + csv_columns()[j];
    if (line != expect) throw Error(ErrorCode::Io, path + ": unexpected CSV header");
    FlightLog log;
    const auto cols = columns(log);
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::size_t j = 0;
        while (std::getline(ls, tok, ',')) {
            if (j >= cols.size()) throw Error(ErrorCode::Io, path + ": too many fields on row " + std::to_string(row));
            cols[j++]->push_back(parse_double_strict(tok));
        }
        if (j != cols.size()) throw Error(ErrorCode::Io, path + ": too few fields on row " + std::to_string(row));
    }
    return log;
}

std::string plot_script(const PlotInputs& in, const std::string& png_name) {
    std::ostringstream s;
    auto col = [](const char* name) {
        const auto& c = csv_columns();
        return std::to_string(std::find(c.begin(), c.end(), name) - c.begin() + 1);
    };
    const std::string n = "'" + in.nodob_csv + "'", c = "'" + in.cdob_csv + "'",
                      i = "'" + in.idob_csv + "'";
    s << "set datafile separator ','\n"
      << "set terminal pngcairo size 900,1500\n"
      << "set output '" << png_name << "'\n"
      << "set multiplot layout 5,1\n"
      << "set key outside right\n"
      << "set xlabel 't (s)'\n"
      << "set title 'altitude, all cases'\n"
      << "set ylabel 'z (m)'\n"
      << "plot " << n << " every ::1 using 1:" << col("z") << " with lines title 'no DOB', \\\n"
      << "     " << c << " every ::1 using 1:" << col("z") << " with lines title 'CDOB', \\\n"
      << "     " << i << " every ::1 using 1:" << col("z") << " with lines title 'IDOB'\n"
      << "set title 'conventional DOB estimate'\n"
      << "set ylabel 'force (N)'\n"
      << "plot " << c << " every ::1 using 1:" << col("d") << " with lines title 'd', \\\n"
      << "     " << c << " every ::1 using 1:" << col("d_hat") << " with lines title 'd_hat'\n"
      << "set title 'image-based DOB estimate'\n"
      << "plot " << i << " every ::1 using 1:" << col("d") << " with lines title 'd', \\\n"
      << "     " << i << " every ::1 using 1:($" << col("d_hat") << "+$" << col("d_f")
      << ") with lines title 'd_hat + d_f'\n"
      << "set title 'position, CDOB vs IDOB'\n"
      << "set ylabel 'position (m)'\n"
      << "plot for [k in '" << col("x") << " " << col("y") << " " << col("z") << "'] " << c
      << " every ::1 using 1:(column(k+0)) with lines title 'CDOB col '.k, \\\n"
      << "     for [k in '" << col("x") << " " << col("y") << " " << col("z") << "'] " << i
      << " every ::1 using 1:(column(k+0)) with lines dt 2 title 'IDOB col '.k\n"
      << "set title 'velocity, CDOB vs IDOB'\n"
      << "set ylabel 'velocity (m/s)'\n"
      << "plot for [k in '" << col("vx") << " " << col("vy") << " " << col("vz") << "'] " << c
      << " every ::1 using 1:(column(k+0)) with lines title 'CDOB col '.k, \\\n"
      << "     for [k in '" << col("vx") << " " << col("vy") << " " << col("vz") << "'] " << i
      << " every ::1 using 1:(column(k+0)) with lines dt 2 title 'IDOB col '.k\n"
      << "unset multiplot\n";
    return s.str();
}

void emit_plot_script(const PlotInputs& in, const std::string& script_path,
                      const std::string& png_name) {
    for (const auto* p : {&in.nodob_csv, &in.cdob_csv, &in.idob_csv})
        if (!std::filesystem::exists(*p)) throw Error(ErrorCode::Io, "plot input missing: " + *p);
    write_text_file(script_path, plot_script(in, png_name));
}

void save_cnn(const CnnModel& m, const std::string& path) {
    m.validate();
    write_text_file(path, format_records("idob-cnn 1",
                                         {{"dims",
                                           {double(m.in_h), double(m.in_w), double(m.n_filters),
                                            double(m.k), double(m.n_classes)}},
                                          {"params", m.params}}));
}

CnnModel load_cnn(const std::string& path) {
    auto r = parse_records(read_text_file(path), "idob-cnn 1", path);
    if (!r.count("dims") || r["dims"].size() != 5 || !r.count("params"))
        throw Error(ErrorCode::Io, path + ": incomplete CNN file");
    const auto& d = r["dims"];
    CnnModel m;
    m.in_h = int(d[0]), m.in_w = int(d[1]), m.n_filters = int(d[2]), m.k = int(d[3]), m.n_classes = int(d[4]);
    m.params = r["params"];
    m.validate();
    return m;
}

void save_lstm(const LstmModel& m, const std::string& path) {
    m.validate();
    write_text_file(path, format_records("idob-lstm 1", {{"hidden", {double(m.hidden)}},
                                                         {"scales", {m.in_scale, m.out_scale}},
                                                         {"params", m.flat()}}));
}

LstmModel load_lstm(const std::string& path) {
    auto r = parse_records(read_text_file(path), "idob-lstm 1", path);
    if (!r.count("hidden") || !r.count("scales") || r["scales"].size() != 2 || !r.count("params"))
        throw Error(ErrorCode::Io, path + ": incomplete LSTM file");
    LstmModel m;
    m.hidden = int(r["hidden"].at(0));
    m.in_scale = r["scales"][0];
    m.out_scale = r["scales"][1];
    m.set_flat(r["params"]);
    m.validate();
    return m;
}

void save_filter(const LearningFilter& L, double dt, const std::string& path) {
    const StateSpaceBlock& b = L.realization;
    std::string s = "# learning filter, FIR realization\n";
    s += "dt " + format_double(dt) + "\n";
    auto put = [&](const char* name, const Mat& M) {
        s += std::string(name) + " " + std::to_string(M.rows()) + " " + std::to_string(M.cols()) + "\n";
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            for (Eigen::Index j = 0; j < M.cols(); ++j) s += (j ? " " : "") + format_double(M(i, j));
            s += "\n";
        }
    };
    put("A", b.A);
    put("B", b.B);
    put("C", b.C);
    put("D", b.D);
    write_text_file(path, s);
}

LearningFilter load_filter(const std::string& path, double* dt) {
    std::istringstream in(read_text_file(path));
    std::string tok;
    Mat M[4];
    double file_dt = 0;
    auto fail = [&](const std::string& m) { throw Error(ErrorCode::Io, path + ": " + m); };
    while (in >> tok) {
        if (tok[0] == '#') {
            std::getline(in, tok);
            continue;
        }
        if (tok == "dt") {
            if (!(in >> tok)) fail("missing dt value");
            file_dt = parse_double_strict(tok);
            continue;
        }
        const int which = tok == "A" ? 0 : tok == "B" ? 1 : tok == "C" ? 2 : tok == "D" ? 3 : -1;
        if (which < 0) fail("unexpected token '" + tok + "'");
        long r = 0, c = 0;
        if (!(in >> r >> c) || r < 0 || c < 0) fail("bad matrix dimensions");
        M[which].resize(r, c);
        for (long i = 0; i < r; ++i)
            for (long j = 0; j < c; ++j) {
                if (!(in >> tok)) fail("truncated matrix " + std::string(1, "ABCD"[which]));
                M[which](i, j) = parse_double_strict(tok);
            }
    }
    if (!(file_dt > 0)) fail("missing or invalid dt");
    if (dt) *dt = file_dt;
    return fir_from_realization(StateSpaceBlock(M[0], M[1], M[2], M[3]));
}

}  // namespace idob
