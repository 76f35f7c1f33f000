#include "cgcare/problem_file.hpp"

#include "cgcare/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cgcare {

namespace {

const std::set<std::string> kMatrixNames = {"A", "B", "Q", "S", "R", "H"};
const std::set<std::string> kSettingNames = {"rank_tol", "ode_tol",  "stat_tol",
                                             "res_tol",  "t_max",    "solution_tol",
                                             "sim_horizon"};

struct Tokenizer {
    Tokenizer(std::istream& stream, std::string from) : in(stream), source(std::move(from)) {}

    std::istream& in;
    std::string source;
    int line_no = 0;
    std::istringstream line;

    /// Next whitespace-separated token, advancing over blank/comment lines.
    /// Returns false at end of input.
    bool next(std::string& token) {
        for (;;) {
            if (line >> token) {
                if (token[0] == '#') {  // comment until end of line
                    line.str("");
                    line.clear();
                    continue;
                }
                return true;
            }
            std::string raw;
            if (!std::getline(in, raw)) return false;
            ++line_no;
            line.str(raw);
            line.clear();
        }
    }

    double number(const std::string& item) {
        std::string token;
        if (!next(token)) {
            throw ParseError(source + ":" + std::to_string(line_no) +
                                 ": unexpected end of input while reading " + item,
                             line_no, item);
        }
        double value = 0.0;
        const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
        if (result.ec != std::errc{} || result.ptr != token.data() + token.size()) {
            throw ParseError(source + ":" + std::to_string(line_no) + ": expected a number for " +
                                 item + ", got '" + token + "'",
                             line_no, item);
        }
        return value;
    }

    long positive_integer(const std::string& item) {
        const double value = number(item);
        if (value < 0.0 || value != std::floor(value)) {
            throw ParseError(source + ":" + std::to_string(line_no) + ": " + item +
                                 " must be a nonnegative integer",
                             line_no, item);
        }
        return static_cast<long>(value);
    }

    [[noreturn]] void fail(const std::string& message, const std::string& item = {}) {
        throw ParseError(source + ":" + std::to_string(line_no) + ": " + message, line_no, item);
    }
};

Matrix read_matrix(Tokenizer& tok, const std::string& name) {
    const long rows = tok.positive_integer(name + " row count");
    const long cols = tok.positive_integer(name + " column count");
    Matrix M(rows, cols);
    for (long i = 0; i < rows; ++i) {
        for (long j = 0; j < cols; ++j) {
            M(i, j) = tok.number(name + "(" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
    return M;
}

void append_matrix(std::ostringstream& out, const std::string& name, const Matrix& M) {
    out << "matrix " << name << ' ' << M.rows() << ' ' << M.cols() << '\n';
    std::array<char, 32> buf;
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), M(i, j));
            out << (j ? " " : "") << std::string_view(buf.data(), res.ptr);
        }
        out << '\n';
    }
}

}  // namespace

bool is_known_setting(const std::string& name) { return kSettingNames.count(name) > 0; }

ProblemFileData parse_problem_file(std::istream& in, const std::string& source) {
    Tokenizer tok{in, source};
    std::map<std::string, Matrix> matrices;
    std::optional<Vector> x0;
    std::optional<double> horizon;
    std::map<std::string, double> settings;

    std::string keyword;
    while (tok.next(keyword)) {
        if (keyword == "matrix") {
            std::string name;
            if (!tok.next(name)) tok.fail("expected a matrix name after 'matrix'");
            if (!kMatrixNames.count(name)) tok.fail("unknown matrix name '" + name + "'", name);
            if (matrices.count(name)) tok.fail("duplicate matrix '" + name + "'", name);
            matrices.emplace(name, read_matrix(tok, name));
        } else if (keyword == "vector") {
            std::string name;
            if (!tok.next(name)) tok.fail("expected a vector name after 'vector'");
            if (name != "x0") tok.fail("unknown vector name '" + name + "'", name);
            if (x0) tok.fail("duplicate vector 'x0'", name);
            const long dim = tok.positive_integer("x0 dimension");
            Vector v(dim);
            for (long i = 0; i < dim; ++i) {
                v(i) = tok.number("x0(" + std::to_string(i) + ")");
            }
            x0 = v;
        } else if (keyword == "scalar") {
            std::string name;
            if (!tok.next(name)) tok.fail("expected a scalar name after 'scalar'");
            if (name == "T") {
                if (horizon) tok.fail("duplicate scalar 'T'", name);
                horizon = tok.number("T");
            } else if (is_known_setting(name)) {
                if (settings.count(name)) tok.fail("duplicate scalar '" + name + "'", name);
                settings[name] = tok.number(name);
            } else {
                tok.fail("unknown scalar name '" + name + "'", name);
            }
        } else {
            tok.fail("expected 'matrix', 'vector' or 'scalar', got '" + keyword + "'");
        }
    }

    for (const char* required : {"A", "B", "Q", "S", "R"}) {
        if (!matrices.count(required)) {
            throw ParseError(source + ": missing required matrix '" + std::string(required) + "'",
                             tok.line_no, required);
        }
    }

    ProblemFileData data;
    data.problem = ProblemData{matrices.at("A"), matrices.at("B"), matrices.at("Q"),
                               matrices.at("S"), matrices.at("R")};
    try {
        check_dimensions(data.problem);
    } catch (const DimensionMismatch& e) {
        throw ParseError(source + ": " + e.what(), tok.line_no, "");
    }
    const Index n = data.problem.n();
    if (matrices.count("H")) {
        const Matrix& H = matrices.at("H");
        if (H.rows() != n || H.cols() != n) {
            throw ParseError(source + ": H must be " + std::to_string(n) + "x" +
                                 std::to_string(n),
                             tok.line_no, "H");
        }
        data.H = H;
    }
    if (x0) {
        if (x0->size() != n) {
            throw ParseError(source + ": x0 must have dimension " + std::to_string(n),
                             tok.line_no, "x0");
        }
        data.x0 = x0;
    }
    data.horizon = horizon;
    data.settings = std::move(settings);
    return data;
}

ProblemFileData parse_problem_text(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    return parse_problem_file(in, source);
}

ProblemFileData load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'", 0, path);
    }
    return parse_problem_file(in, path);
}

std::string write_problem_file(const ProblemFileData& data) {
    std::ostringstream out;
    append_matrix(out, "A", data.problem.A);
    append_matrix(out, "B", data.problem.B);
    append_matrix(out, "Q", data.problem.Q);
    append_matrix(out, "S", data.problem.S);
    append_matrix(out, "R", data.problem.R);
    if (data.H) append_matrix(out, "H", *data.H);
    std::array<char, 32> buf;
    const auto scalar_text = [&buf](double v) {
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), res.ptr);
    };
    if (data.x0) {
        out << "vector x0 " << data.x0->size() << '\n';
        for (Index i = 0; i < data.x0->size(); ++i) {
            out << (i ? " " : "") << scalar_text((*data.x0)(i));
        }
        out << '\n';
    }
    if (data.horizon) out << "scalar T " << scalar_text(*data.horizon) << '\n';
    for (const auto& [name, value] : data.settings) {
        out << "scalar " << name << ' ' << scalar_text(value) << '\n';
    }
    return out.str();
}

}  // namespace cgcare
