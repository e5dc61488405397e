#pragma once

#include "lamdyn/analysis.hpp"
#include "lamdyn/markov.hpp"

#include <string>
#include <vector>

namespace lamdyn {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& what)
        : std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + what),
          line(line), col(col) {}
    int line;
    int col;
};

// Text form of a lamination build request.  Keys may appear in any order:
//   degree = 2
//   depth = 8
//   generators = 1/12 7/12 | 1/7 2/7 4/7
// Classes are separated by `|`, angles inside a class by whitespace.  Blank
// lines and `#` comments are ignored.
struct LaminationSpecFile {
    int degree = 0;
    int depth = 0;
    std::vector<std::vector<Angle>> generators;
};

LaminationSpecFile parse_lamination_spec(const std::string& text);
std::string write_lamination_spec(const LaminationSpecFile& s);

// Generator classes from the parsed spec; stream angles are ordered at the
// given digit precision.
std::vector<AngleClass> spec_generator_classes(const LaminationSpecFile& s, int precision);

// Full listing of a built lamination: header plus one line per class with its
// generation tag and orbit data, in canonical class order.
std::string write_lamination(const Lamination& L);

// Line-oriented tree export: one vertex per line in the form
//   class; kind; valence; depth; image-class-or-FRONTIER
// followed by one `class -- class` line per tree edge.  Valence is the
// class-derived count; tree degrees that disagree with it at this depth are
// appended as comment lines rather than silently merged.
std::string write_tree(const DendriteApprox& D);

// Markov tree map text format: vertex list with rational tree coordinates
// (path distance from vertex 0), edge list with lengths, vertex images, and
// the per-edge subdivision with image paths and slopes.  parse_markov_map
// round-trips write_markov_map byte for byte.
std::string write_markov_map(const MarkovTreeMap& f);
MarkovTreeMap parse_markov_map(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lamdyn
