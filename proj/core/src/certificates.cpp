#include "hcm/certificates.hpp"

#include <algorithm>

namespace hcm {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Indeterminate: return "indeterminate";
    case Status::NotApplicable: return "not_applicable";
    case Status::Info: return "info";
  }
  return "unknown";
}

bool is_ok(Status s) {
  return s == Status::Pass || s == Status::NotApplicable || s == Status::Info;
}

CertificateAccumulator::CertificateAccumulator(std::string id, std::string anchor, double tol)
    : id_(std::move(id)), anchor_(std::move(anchor)), tol_(tol) {}

void CertificateAccumulator::add(double measured, double bound) {
  const double margin = bound - measured;
  if (samples_ == 0 || margin < worst_margin_) {
    worst_measured_ = measured;
    worst_bound_ = bound;
    worst_margin_ = margin;
  }
  ++samples_;
  if (!(measured <= bound + tol_)) ++failures_;
}

Certificate CertificateAccumulator::result() const {
  Certificate c;
  c.id = id_;
  c.anchor = anchor_;
  c.measured = worst_measured_;
  c.bound = worst_bound_;
  c.margin = worst_margin_;
  c.samples = samples_;
  c.failures = failures_;
  c.indeterminate = indeterminate_;
  if (failures_ > 0) {
    c.status = Status::Fail;
  } else if (indeterminate_ > 0 || samples_ == 0) {
    c.status = samples_ == 0 && indeterminate_ == 0 ? Status::NotApplicable : Status::Indeterminate;
  } else {
    c.status = Status::Pass;
  }
  return c;
}

Certificate CertificateAccumulator::info() const {
  Certificate c = result();
  c.status = Status::Info;
  return c;
}

Certificate not_applicable(std::string id, std::string anchor) {
  Certificate c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.status = Status::NotApplicable;
  return c;
}

bool all_ok(const std::vector<Certificate>& certs) {
  return std::all_of(certs.begin(), certs.end(), [](const Certificate& c) { return is_ok(c.status); });
}

}  // namespace hcm
