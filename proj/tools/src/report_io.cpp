#include "report_io.hpp"

#include "newtonflux/catalog.hpp"

#include <cmath>

namespace newtonflux::io {

Json number(double v) {
  if (!std::isfinite(v)) return Json(nullptr);
  return Json(v);
}

Json to_json(const FluxReport& rep) {
  Json terms = Json::object();
  for (const auto& [name, value] : rep.terms) terms[name] = number(value);
  Json quad = Json::object();
  quad["orders"] = rep.quadrature.orders;
  quad["refine_delta"] = rep.quadrature.refine_delta < 0.0 ? Json(nullptr) : number(rep.quadrature.refine_delta);
  quad["refined_rel_residual"] =
      rep.quadrature.refined_rel_residual < 0.0 ? Json(nullptr) : number(rep.quadrature.refined_rel_residual);
  Json j = Json::object();
  j["formula"] = rep.formula;
  j["r"] = rep.r;
  j["lhs"] = number(rep.lhs);
  j["rhs"] = number(rep.rhs);
  j["abs_residual"] = number(rep.abs_residual);
  j["rel_residual"] = number(rep.rel_residual);
  j["quadrature"] = quad;
  j["config"] = rep.config;
  j["field"] = rep.field;
  j["assumptions"] = rep.assumptions;
  j["terms"] = terms;
  return j;
}

Json to_json(const HrEstimate& est) {
  Json j = Json::object();
  j["r"] = est.r;
  j["H_r"] = number(est.H_r);
  j["abs_H_r"] = number(est.abs_Hr);
  j["bound"] = number(est.bound);
  j["bound_general"] = number(est.bound_general);
  j["bound_round"] = est.bound_round ? number(*est.bound_round) : Json(nullptr);
  j["constant_C"] = number(est.constant_C);
  j["slack"] = number(est.slack);
  j["vol_D"] = number(est.vol_D);
  j["boundary_h_integral"] = number(est.boundary_h_integral);
  j["boundary_radius"] = est.boundary_radius ? number(*est.boundary_radius) : Json(nullptr);
  j["samples"] = est.samples;
  return j;
}

Json to_json(const VolumeBound& vb) {
  Json j = Json::object();
  j["vol_M"] = number(vb.vol_M);
  j["vol_boundary"] = number(vb.vol_boundary);
  j["bound"] = number(vb.bound);
  j["slack"] = number(vb.slack);
  j["equality"] = vb.equality;
  j["rho"] = number(vb.rho);
  j["rho0"] = number(vb.rho0);
  return j;
}

Json to_json(const TransversalityReport& tr) {
  Json j = Json::object();
  j["min_abs_xi_nu"] = number(tr.min_abs_xi_nu);
  j["min_T_eigenvalue"] = number(tr.min_T_eigenvalue);
  j["min_S2"] = number(tr.min_S2);
  j["min_abs_Sn"] = number(tr.min_abs_Sn);
  j["threshold"] = number(tr.threshold);
  j["transverse"] = tr.transverse;
  j["boundary_samples"] = tr.boundary_samples;
  j["interior_samples"] = tr.interior_samples;
  return j;
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (const auto& c : columns) field(c);
  end_row();
}

CsvWriter& CsvWriter::field(const std::string& text) {
  if (!first_) out_ << ',';
  first_ = false;
  if (text.find_first_of(",\"\n") == std::string::npos) {
    out_ << text;
  } else {
    out_ << '"';
    for (char c : text) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(std::isfinite(v) ? format_number(v) : std::string()); }

CsvWriter& CsvWriter::field(int v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

std::string join_orders(const std::vector<int>& orders) {
  std::string s;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(orders[i]);
  }
  return s;
}

}  // namespace newtonflux::io
