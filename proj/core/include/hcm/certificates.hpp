#pragma once

#include <string>
#include <vector>

namespace hcm {

enum class Status { Pass, Fail, Indeterminate, NotApplicable, Info };

std::string to_string(Status s);
/// Pass, NotApplicable and Info do not count against a run.
bool is_ok(Status s);

/// One machine-checked inequality "measured <= bound" with its slack.
struct Certificate {
  std::string id;
  std::string anchor;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - measured
  Status status = Status::Pass;
  int samples = 0;
  int failures = 0;
  int indeterminate = 0;
};

/// Folds per-sample checks of one inequality into the worst case (smallest margin).
class CertificateAccumulator {
 public:
  CertificateAccumulator(std::string id, std::string anchor, double tol);

  /// Records measured <= bound + tol.
  void add(double measured, double bound);
  void add_indeterminate() { ++indeterminate_; }

  int samples() const { return samples_; }
  Certificate result() const;
  /// Reports the worst sample with Info status instead of pass/fail.
  Certificate info() const;

 private:
  std::string id_;
  std::string anchor_;
  double tol_;
  int samples_ = 0;
  int failures_ = 0;
  int indeterminate_ = 0;
  double worst_measured_ = 0.0;
  double worst_bound_ = 0.0;
  double worst_margin_ = 0.0;
};

Certificate not_applicable(std::string id, std::string anchor);

/// True when every certificate is ok.
bool all_ok(const std::vector<Certificate>& certs);

}  // namespace hcm
