#include "gconv/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gconv {

Json to_json(const FockVector& state) {
  Json amps = Json::array();
  for (int n = 0; n <= state.cutoff; ++n)
    amps.push_back({state.amplitudes[n].real(), state.amplitudes[n].imag()});
  return Json{{"cutoff", state.cutoff}, {"amplitudes", amps}};
}

FockVector fock_vector_from_json(const Json& j) {
  const auto& amps = j.at("amplitudes");
  CVector v(amps.size());
  for (size_t n = 0; n < amps.size(); ++n)
    v[static_cast<int>(n)] = Complex(amps[n][0].get<double>(),
                                     amps[n][1].get<double>());
  return FockVector::make(v);
}

namespace {

Json matrix2(const Eigen::Matrix2d& m) {
  return Json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
}

Eigen::Matrix2d matrix2_from(const Json& j) {
  Eigen::Matrix2d m;
  m << j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(),
      j[1][1].get<double>();
  return m;
}

}  // namespace

Json to_json(const GaussianChannel& ch) {
  return Json{{"X", matrix2(ch.X)},
              {"Y", matrix2(ch.Y)},
              {"l", {ch.l[0], ch.l[1]}}};
}

GaussianChannel channel_from_json(const Json& j) {
  GaussianChannel ch;
  ch.X = matrix2_from(j.at("X"));
  ch.Y = matrix2_from(j.at("Y"));
  ch.l << j.at("l")[0].get<double>(), j.at("l")[1].get<double>();
  return ch;
}

Json to_json(const OptResult& r) {
  Json x = Json::array();
  for (int i = 0; i < r.best_x.size(); ++i) x.push_back(r.best_x[i]);
  return Json{{"best_x", x},
              {"best_value", r.best_value},
              {"evaluations", r.evaluations},
              {"seed", r.seed},
              {"budget", r.budget}};
}

Json to_json(const WignerGrid& grid) {
  Json q = Json::array(), p = Json::array(), w = Json::array();
  for (int i = 0; i < grid.q_axis.size(); ++i) q.push_back(grid.q_axis[i]);
  for (int j = 0; j < grid.p_axis.size(); ++j) p.push_back(grid.p_axis[j]);
  for (int i = 0; i < grid.values.rows(); ++i)
    for (int j = 0; j < grid.values.cols(); ++j) w.push_back(grid.values(i, j));
  return Json{{"q_axis", q}, {"p_axis", p}, {"values_row_major", w}};
}

std::string wigner_csv(const WignerGrid& grid) {
  std::ostringstream out;
  out.precision(17);
  out << "q,p,W\n";
  for (int i = 0; i < grid.q_axis.size(); ++i)
    for (int j = 0; j < grid.p_axis.size(); ++j)
      out << grid.q_axis[i] << ',' << grid.p_axis[j] << ','
          << grid.values(i, j) << '\n';
  return out.str();
}

void write_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move output into place: " + path);
}

}  // namespace gconv
