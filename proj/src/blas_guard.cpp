#include "splocate/blas_guard.hpp"

#include "splocate/types.hpp"

#include <Eigen/Dense>
#include <Eigen/SPQRSupport>
#include <Eigen/SparseCore>

#include <dlfcn.h>
#include <link.h>

#include <cstdlib>
#include <mutex>
#include <random>
#include <set>
#include <vector>

namespace splocate {

namespace {

std::string g_override;

// Sparse QR residual against dense column-pivoted QR on a fixed random system.
bool spqr_agrees() {
  std::mt19937 gen(12345);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_int_distribution<int> keep(0, 3);
  const int m = 240, n = 120;
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (keep(gen) == 0) dense(i, j) = val(gen);
    }
  }
  for (int j = 0; j < n; ++j) dense(j, j) += 2.0;
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) b(i) = val(gen);
  const Eigen::SparseMatrix<double> sparse = dense.sparseView();
  Eigen::SPQR<Eigen::SparseMatrix<double>> qr(sparse);
  if (qr.info() != Eigen::Success) return false;
  const Eigen::VectorXd x = qr.solve(b);
  const Eigen::VectorXd xd = dense.colPivHouseholderQr().solve(b);
  return x.allFinite() && (x - xd).norm() <= 1e-8 * (1.0 + xd.norm());
}

using VoidFn = void (*)();

struct OpenBlasCopy {
  VoidFn quit;
  VoidFn init;
};

// Every loaded library exporting the OpenBLAS dynamic-arch hooks; distros can
// map two copies (libblas.so.3 and libopenblas.so.0).
std::vector<OpenBlasCopy> openblas_copies() {
  std::vector<std::string> names;
  dl_iterate_phdr(
      [](dl_phdr_info* info, size_t, void* data) {
        if (info->dlpi_name && info->dlpi_name[0]) static_cast<std::vector<std::string>*>(data)->push_back(info->dlpi_name);
        return 0;
      },
      &names);
  std::vector<OpenBlasCopy> copies;
  std::set<void*> seen;
  for (const std::string& name : names) {
    void* handle = dlopen(name.c_str(), RTLD_NOW | RTLD_NOLOAD);
    if (!handle) continue;
    void* quit = dlsym(handle, "gotoblas_dynamic_quit");
    void* init = dlsym(handle, "gotoblas_dynamic_init");
    if (quit && init && seen.insert(init).second) {
      copies.push_back({reinterpret_cast<VoidFn>(quit), reinterpret_cast<VoidFn>(init)});
    }
    dlclose(handle);
  }
  return copies;
}

void check_once() {
  if (spqr_agrees()) return;
  const std::vector<OpenBlasCopy> copies = openblas_copies();
  if (copies.empty()) throw Error("sparse QR self-check failed and the BLAS in use cannot be reconfigured");
  for (const char* core : {"SkylakeX", "Haswell", "SandyBridge", "Nehalem", "Prescott"}) {
    setenv("OPENBLAS_CORETYPE", core, 1);
    for (const OpenBlasCopy& c : copies) c.quit();
    for (const OpenBlasCopy& c : copies) c.init();
    if (spqr_agrees()) {
      g_override = core;
      return;
    }
  }
  throw Error("sparse QR self-check failed for every OpenBLAS kernel set");
}

}  // namespace

void ensure_blas_sane() {
  static std::once_flag flag;
  std::call_once(flag, check_once);
}

const std::string& blas_override() { return g_override; }

}  // namespace splocate
