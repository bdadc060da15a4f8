#include "osclab/gridop.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <mutex>

#include "osclab/io.hpp"
#include "osclab/parallel.hpp"

namespace osclab {

GridFunction::GridFunction(std::array<long, 3> dims, double box_length)
    : dims_(dims), box_(box_length) {
  for (long n : dims_)
    require(n >= 8 && n % 2 == 0, errc::invalid_argument, "grid dims must be even and at least 8");
  require(box_ > 0.0, errc::invalid_argument, "box length must be positive");
  data_.assign(std::size_t(dims_[0]) * dims_[1] * dims_[2], cplx(0.0, 0.0));
}

void GridFunction::fill(const std::function<cplx(double, double, double)>& f) {
  std::size_t idx = 0;
  for (long i1 = 0; i1 < dims_[0]; ++i1) {
    double x1 = coord(0, i1);
    for (long i2 = 0; i2 < dims_[1]; ++i2) {
      double x2 = coord(1, i2);
      for (long i3 = 0; i3 < dims_[2]; ++i3) data_[idx++] = f(x1, x2, coord(2, i3));
    }
  }
}

GridFunction modulated_gaussian(std::array<long, 3> dims, double box_length, double width,
                                std::array<double, 3> carrier, std::array<double, 3> center) {
  GridFunction f(dims, box_length);
  double inv_w2 = 1.0 / (width * width);
  f.fill([&](double x, double y, double z) {
    double dx = x - center[0], dy = y - center[1], dz = z - center[2];
    double q = pi * (dx * dx + dy * dy + dz * dz) * inv_w2;
    double phase = two_pi * (carrier[0] * x + carrier[1] * y + carrier[2] * z);
    return std::exp(-q) * cplx(std::cos(phase), std::sin(phase));
  });
  return f;
}

void dft3(const GridFunction& in, std::vector<cplx>& out, int sign) {
  static std::mutex plan_mutex;
  out.resize(in.size());
  std::vector<cplx> tmp(in.samples());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    plan = fftw_plan_dft_3d(int(in.dims()[0]), int(in.dims()[1]), int(in.dims()[2]),
                            reinterpret_cast<fftw_complex*>(tmp.data()),
                            reinterpret_cast<fftw_complex*>(out.data()),
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  require(plan != nullptr, errc::internal_error, "FFTW planning failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(plan);
  }
}

double lp_norm(const GridFunction& f, double p) {
  require(p >= 1.0 && p <= 16.0, errc::invalid_argument, "p must lie in [1, 16]");
  std::vector<double> terms(f.size());
  const auto& d = f.samples();
  for (std::size_t i = 0; i < d.size(); ++i) terms[i] = std::pow(std::abs(d[i]), p);
  return std::pow(tree_sum(std::span<const double>(terms)) * f.cell_volume(), 1.0 / p);
}

double sobolev_norm(const GridFunction& f, double s) {
  require(std::abs(s) <= 4.0, errc::invalid_argument, "|s| must be at most 4");
  std::vector<cplx> hat;
  dft3(f, hat, -1);
  const double scale = f.cell_volume();  // continuum transform estimate per bin
  const double dvol_freq = 1.0 / (f.box_length() * f.box_length() * f.box_length());
  std::vector<double> terms(hat.size());
  std::size_t idx = 0;
  for (long i1 = 0; i1 < f.dims()[0]; ++i1) {
    double x1 = f.freq(0, i1);
    for (long i2 = 0; i2 < f.dims()[1]; ++i2) {
      double x2 = f.freq(1, i2);
      for (long i3 = 0; i3 < f.dims()[2]; ++i3) {
        double x3 = f.freq(2, i3);
        double w = std::pow(1.0 + x1 * x1 + x2 * x2 + x3 * x3, s);
        double a = std::abs(hat[idx] * scale);
        terms[idx++] = w * a * a;
      }
    }
  }
  return std::sqrt(tree_sum(std::span<const double>(terms)) * dvol_freq);
}

cplx inner_product(const GridFunction& f, const GridFunction& g) {
  require(f.dims() == g.dims() && f.box_length() == g.box_length(), errc::invalid_argument,
          "grids must match");
  std::vector<cplx> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = f.samples()[i] * std::conj(g.samples()[i]);
  return tree_sum(std::span<const cplx>(terms)) * f.cell_volume();
}

namespace {

nlohmann::json table_key_json(const OperatorParams& params, const RadialProfile& profile,
                              const KernelOmega& omega, std::array<long, 3> dims,
                              double box_length, const TableConfig& cfg) {
  return {{"params", params.to_json()},
          {"profile", profile.to_json()},
          {"kernel", omega.to_json()},
          {"dims", dims},
          {"box_length", box_length},
          {"l_min", cfg.l_min},
          {"l_max", cfg.l_max},
          {"tol", cfg.ml.tol},
          {"skip_tol", cfg.ml.skip_tol},
          {"format", 1}};
}

}  // namespace

std::shared_ptr<const MultiplierTable> build_multiplier_table(
    const OperatorParams& params, const RadialProfile& profile, const KernelOmega& omega,
    std::array<long, 3> dims, double box_length, const TableConfig& cfg) {
  require(cfg.l_min <= cfg.l_max, errc::invalid_argument, "bad dyadic window");
  std::string hash =
      content_hash_hex(canonical_dump(table_key_json(params, profile, omega, dims, box_length, cfg)));

  if (!cfg.cache_path.empty() && std::filesystem::exists(cfg.cache_path)) {
    auto loaded = load_multiplier_table(cfg.cache_path);
    if (loaded && loaded->content_hash == hash) return loaded;
  }

  auto table = std::make_shared<MultiplierTable>();
  table->dims = dims;
  table->box_length = box_length;
  table->l_min = cfg.l_min;
  table->l_max = cfg.l_max;
  table->tol = cfg.ml.tol;
  table->content_hash = hash;
  GridFunction probe(dims, box_length);  // for the frequency map
  table->values.assign(probe.size(), cplx(0, 0));

  const long n1 = dims[0], n2 = dims[1], n3 = dims[2];
  parallel_for(std::size_t(n1), cfg.threads, [&](std::size_t s1) {
    long i1 = long(s1);
    Frequency xi;
    for (long i2 = 0; i2 < n2; ++i2) {
      for (long i3 = 0; i3 < n3; ++i3) {
        xi.xi_prime = {probe.freq(0, i1), probe.freq(1, i2)};
        xi.xi_last = probe.freq(2, i3);
        cplx sum = 0.0;
        for (int l = cfg.l_min; l <= cfg.l_max; ++l)
          sum += m_l(params, profile, omega, xi, l, cfg.ml).value;
        table->values[probe.index(i1, i2, i3)] = sum;
      }
    }
  });
  double mx = 0.0;
  for (const cplx& v : table->values) mx = std::max(mx, std::abs(v));
  table->max_abs = mx;

  if (!cfg.cache_path.empty()) save_multiplier_table(*table, cfg.cache_path);
  return table;
}

namespace {

template <class T>
void put_le(std::string& buf, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  buf.append(reinterpret_cast<char*>(b), sizeof(T));
}

template <class T>
T get_le(const std::string& buf, std::size_t& off) {
  T v;
  require(off + sizeof(T) <= buf.size(), errc::io_error, "truncated table file");
  std::memcpy(&v, buf.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

}  // namespace

void save_multiplier_table(const MultiplierTable& table, const std::string& path) {
  std::string buf;
  buf.reserve(56 + 16 * table.values.size());
  buf.append("OSCM", 4);
  put_le<std::uint32_t>(buf, 1u);
  for (long d : table.dims) put_le<std::uint32_t>(buf, std::uint32_t(d));
  put_le<double>(buf, table.box_length);
  require(table.content_hash.size() == 64, errc::invalid_argument, "bad content hash");
  for (int i = 0; i < 32; ++i) {
    unsigned byte = std::stoul(table.content_hash.substr(2 * i, 2), nullptr, 16);
    buf.push_back(char(byte));
  }
  put_le<std::int32_t>(buf, table.l_min);
  put_le<std::int32_t>(buf, table.l_max);
  put_le<double>(buf, table.tol);
  for (const cplx& v : table.values) {
    put_le<double>(buf, v.real());
    put_le<double>(buf, v.imag());
  }
  write_text_file(path, buf);
}

std::shared_ptr<MultiplierTable> load_multiplier_table(const std::string& path) {
  std::string buf = read_text_file(path);
  std::size_t off = 0;
  require(buf.size() >= 4 && buf.compare(0, 4, "OSCM") == 0, errc::io_error,
          "not a multiplier table file");
  off = 4;
  auto version = get_le<std::uint32_t>(buf, off);
  require(version == 1, errc::io_error, "unsupported table version");
  auto table = std::make_shared<MultiplierTable>();
  for (int a = 0; a < 3; ++a) table->dims[a] = long(get_le<std::uint32_t>(buf, off));
  table->box_length = get_le<double>(buf, off);
  static const char* hexd = "0123456789abcdef";
  std::string hash;
  for (int i = 0; i < 32; ++i) {
    unsigned char byte = static_cast<unsigned char>(buf.at(off++));
    hash.push_back(hexd[byte >> 4]);
    hash.push_back(hexd[byte & 15]);
  }
  table->content_hash = hash;
  table->l_min = get_le<std::int32_t>(buf, off);
  table->l_max = get_le<std::int32_t>(buf, off);
  table->tol = get_le<double>(buf, off);
  std::size_t count = std::size_t(table->dims[0]) * table->dims[1] * table->dims[2];
  table->values.resize(count);
  double mx = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double re = get_le<double>(buf, off);
    double im = get_le<double>(buf, off);
    table->values[i] = cplx(re, im);
    mx = std::max(mx, std::abs(table->values[i]));
  }
  table->max_abs = mx;
  return table;
}

namespace {

double leakage_fraction(const GridFunction& f, const std::vector<cplx>& hat) {
  double total = 0.0, outer = 0.0;
  std::size_t idx = 0;
  for (long i1 = 0; i1 < f.dims()[0]; ++i1) {
    bool o1 = std::abs(f.freq_index(0, i1)) > (7 * f.dims()[0]) / 16;
    for (long i2 = 0; i2 < f.dims()[1]; ++i2) {
      bool o2 = o1 || std::abs(f.freq_index(1, i2)) > (7 * f.dims()[1]) / 16;
      for (long i3 = 0; i3 < f.dims()[2]; ++i3) {
        bool o3 = o2 || std::abs(f.freq_index(2, i3)) > (7 * f.dims()[2]) / 16;
        double e = std::norm(hat[idx++]);
        total += e;
        if (o3) outer += e;
      }
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

GridFunction apply_with_values(const GridFunction& f, const MultiplierTable& table, bool conjugate,
                               SpectralDiagnostics* diag) {
  require(f.dims() == table.dims && f.box_length() == table.box_length, errc::invalid_argument,
          "grid does not match the multiplier table");
  std::vector<cplx> hat;
  dft3(f, hat, -1);
  if (diag) diag->leakage = leakage_fraction(f, hat);
  for (std::size_t i = 0; i < hat.size(); ++i)
    hat[i] *= conjugate ? std::conj(table.values[i]) : table.values[i];
  GridFunction out(f.dims(), f.box_length());
  GridFunction tmp_holder(f.dims(), f.box_length());
  tmp_holder.samples() = std::move(hat);
  dft3(tmp_holder, out.samples(), +1);
  double inv_n = 1.0 / double(f.size());
  for (cplx& v : out.samples()) v *= inv_n;
  return out;
}

}  // namespace

GridFunction apply_spectral(const GridFunction& f, const MultiplierTable& table,
                            SpectralDiagnostics* diag) {
  return apply_with_values(f, table, false, diag);
}

GridFunction adjoint_apply_spectral(const GridFunction& g, const MultiplierTable& table,
                                    SpectralDiagnostics* diag) {
  return apply_with_values(g, table, true, diag);
}

std::pair<int, int> window_for_truncation(double r_inner, double r_outer) {
  require(r_inner > 0.0 && r_inner < r_outer, errc::invalid_argument,
          "need 0 < r_inner < r_outer");
  int l_hi = int(std::ceil(std::log2(1.0 / r_inner) - 1e-12));
  int l_lo = -int(std::ceil(std::log2(r_outer) - 1e-12));
  return {l_lo, l_hi};
}

std::vector<cplx> apply_direct(const std::function<cplx(double, double, double)>& f,
                               const std::vector<std::array<double, 3>>& points,
                               const OperatorParams& params, const RadialProfile& profile,
                               const KernelOmega& omega, int l_lo, int l_hi, int quad_density,
                               long panel_cap) {
  require(params.n == 2, errc::invalid_argument, "direct application is implemented for n = 2");
  require(l_lo <= l_hi, errc::invalid_argument, "bad dyadic window");
  const double r_lo = std::ldexp(1.0, -l_hi - 1);
  const double r_hi = std::ldexp(1.0, -l_lo + 1);
  const double alpha = params.alpha, beta = params.beta;

  // Oscillation of e^{-2 pi i r^-beta} dominates near r_lo.
  double rad_r = two_pi * std::pow(r_lo, -beta) + 12.0 * quad_density;
  double rad_u = 12.0 * std::max(8, quad_density / 2 + 2 * omega.max_order());
  QuadratureLimits lim{panel_cap};

  std::vector<cplx> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto& x = points[p];
    auto integrand = [&](double r, double u) -> cplx {
      double w = eta_window_sum(r, l_lo, l_hi);
      if (w == 0.0) return cplx(0.0, 0.0);
      double z = profile.eval(r).phi;
      cplx fv = f(x[0] - r * std::cos(u), x[1] - r * std::sin(u), x[2] - z);
      double phase = -two_pi * std::pow(r, -beta);
      return fv * cplx(std::cos(phase), std::sin(phase)) * omega.eval(u) *
             std::pow(r, -alpha - 1.0) * w;
    };
    QuadratureResult q =
        integrate_panels_2d(integrand, r_lo, r_hi, 0.0, two_pi, rad_r, rad_u, 1e-8, lim);
    out[p] = q.value;
  }
  return out;
}

GridFunction apply_spectral_masked(const GridFunction& f, const OperatorParams& params,
                                   const RadialProfile& profile, const KernelOmega& omega,
                                   int l_lo, int l_hi, const MlOptions& ml, double rel_threshold,
                                   int threads, double* max_abs_m) {
  std::vector<cplx> hat;
  dft3(f, hat, -1);
  double hmax = 0.0;
  for (const cplx& v : hat) hmax = std::max(hmax, std::abs(v));
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < hat.size(); ++i)
    if (std::abs(hat[i]) >= rel_threshold * hmax) active.push_back(i);

  const long n2 = f.dims()[1], n3 = f.dims()[2];
  std::vector<cplx> mvals(active.size());
  parallel_for(active.size(), threads, [&](std::size_t a) {
    std::size_t idx = active[a];
    long i1 = long(idx) / (n2 * n3);
    long i2 = (long(idx) / n3) % n2;
    long i3 = long(idx) % n3;
    Frequency xi;
    xi.xi_prime = {f.freq(0, i1), f.freq(1, i2)};
    xi.xi_last = f.freq(2, i3);
    cplx sum = 0.0;
    for (int l = l_lo; l <= l_hi; ++l) sum += m_l(params, profile, omega, xi, l, ml).value;
    mvals[a] = sum;
  });
  if (max_abs_m) {
    double mx = 0.0;
    for (const cplx& v : mvals) mx = std::max(mx, std::abs(v));
    *max_abs_m = mx;
  }

  std::vector<cplx> product(hat.size(), cplx(0.0, 0.0));
  for (std::size_t a = 0; a < active.size(); ++a) product[active[a]] = hat[active[a]] * mvals[a];

  GridFunction holder(f.dims(), f.box_length());
  holder.samples() = std::move(product);
  GridFunction rf(f.dims(), f.box_length());
  dft3(holder, rf.samples(), +1);
  double inv_n = 1.0 / double(rf.size());
  for (cplx& v : rf.samples()) v *= inv_n;
  return rf;
}

SmoothingLadderResult sobolev_smoothing_check(const OperatorParams& params,
                                              const RadialProfile& profile,
                                              const KernelOmega& omega,
                                              std::array<long, 3> dims, double box_length,
                                              double width, const std::vector<double>& carriers,
                                              std::array<double, 3> carrier_dir, double s,
                                              const MlOptions& ml, double rel_threshold,
                                              double slack, int threads) {
  require(!carriers.empty(), errc::invalid_argument, "empty carrier ladder");
  double dn = std::sqrt(carrier_dir[0] * carrier_dir[0] + carrier_dir[1] * carrier_dir[1] +
                        carrier_dir[2] * carrier_dir[2]);
  require(dn > 0.0, errc::invalid_argument, "carrier direction must be nonzero");

  SmoothingLadderResult res;
  res.carriers = carriers;

  double max_carrier = *std::max_element(carriers.begin(), carriers.end());
  Frequency top;
  top.xi_prime = {max_carrier, 0.0};
  auto [l_lo, l_hi] = default_window_for(top);

  for (double carrier : carriers) {
    std::array<double, 3> kvec{carrier * carrier_dir[0] / dn, carrier * carrier_dir[1] / dn,
                               carrier * carrier_dir[2] / dn};
    GridFunction f = modulated_gaussian(dims, box_length, width, kvec);
    GridFunction rf = apply_spectral_masked(f, params, profile, omega, l_lo, l_hi, ml,
                                            rel_threshold, threads);
    res.ratios.push_back(sobolev_norm(rf, s) / lp_norm(f, 2.0));
  }
  double base = res.ratios.front();
  double mx = *std::max_element(res.ratios.begin(), res.ratios.end());
  res.pass = mx <= slack * base;
  return res;
}

}  // namespace osclab
