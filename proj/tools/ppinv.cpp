// ppinv - construct permutation polynomials over small finite fields, decide
// their criteria against a brute-force bijection oracle, and emit their
// closed-form compositional inverses as machine-readable certificates.
//
// Exit codes: 0 verdict computed (PERMUTATION or NOT), 1 usage/parameter
// error, 2 internal inconsistency (criterion/oracle mismatch or a closed
// form that fails pointwise validation).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppinv/certificate.hpp"
#include "ppinv/parallel.hpp"
#include "ppinv/selftest.hpp"

using namespace ppinv;

namespace {

std::uint64_t field_cap_from_env() {
    const char* env = std::getenv("PPINV_MAX_FIELD");
    if (!env || !*env) return kDefaultFieldCap;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v < 2) {
        throw std::invalid_argument("PPINV_MAX_FIELD must be a positive integer");
    }
    return static_cast<std::uint64_t>(v);
}

FieldCtx field_for_q(std::uint64_t q, std::uint32_t n) {
    std::uint32_t p = 0, e = 0;
    decompose_prime_power(q, p, e);
    return FieldCtx::make(p, e, n, field_cap_from_env());
}

// "a0;a1;..." with each element a comma-separated base-p coefficient list
std::vector<FieldElement> parse_element_list(const FieldCtx& ctx, const std::string& s) {
    std::vector<FieldElement> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(';', pos);
        std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
        if (tok.empty()) throw std::invalid_argument("empty element in list");
        out.push_back(ctx.parse_element(tok));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

struct QuadCliArgs {
    std::uint64_t q = 0;
    std::string a, b;
    std::uint64_t k = 0;
    std::string variant;  // "", "a", "b"
};

void add_quad_options(CLI::App* cmd, QuadCliArgs& args) {
    cmd->add_option("--q", args.q, "subfield size q (prime power)")->required();
    cmd->add_option("--a", args.a, "coefficient a, base-p list (e.g. 1,0)")->required();
    cmd->add_option("--b", args.b, "coefficient b, base-p list")->required();
    cmd->add_option("--k", args.k, "exponent k of (x^q - x)^k")->required();
    cmd->add_option("--case", args.variant, "force case a or b (default: inferred)")
        ->check(CLI::IsMember({"a", "b"}));
}

// params reference ctx; the caller keeps ctx alive in its own frame
QuadFamilyParams quad_params_from(const FieldCtx& ctx, const QuadCliArgs& args) {
    FieldElement a = ctx.parse_element(args.a);
    FieldElement b = ctx.parse_element(args.b);
    return args.variant.empty()
               ? make_quad_params(ctx, a, b, args.k)
               : make_quad_params(ctx, a, b, args.k,
                                  args.variant == "a" ? QuadCase::A : QuadCase::B);
}

struct AmlCliArgs {
    std::uint64_t q = 0;
    std::uint32_t n = 0;
    std::string b, L;
    std::uint64_t m = 0;
};

void add_aml_options(CLI::App* cmd, AmlCliArgs& args) {
    cmd->add_option("--q", args.q, "subfield size q (prime power)")->required();
    cmd->add_option("--n", args.n, "extension degree n (>= 2)")->required();
    cmd->add_option("--b", args.b, "norm-1 element b, base-p list")->required();
    cmd->add_option("--m", args.m, "power m of A(x)")->required();
    cmd->add_option("--L", args.L,
                    "linearized coefficients a0;a1;...;a_{n-1} (base-p lists, ';'-separated)")
        ->required();
}

AmlParams aml_params_from(const FieldCtx& ctx, const AmlCliArgs& args) {
    FieldElement b = ctx.parse_element(args.b);
    std::vector<FieldElement> coeffs = parse_element_list(ctx, args.L);
    LinearizedPoly L = linearized(ctx, std::move(coeffs));
    return make_aml_params(ctx, b, args.m, std::move(L));
}

int emit_certificate(const CertificateResult& r) {
    std::cout << r.cert.dump(2) << "\n";
    if (!r.consistent) {
        std::cerr << "ppinv: criterion and oracle disagree (internal inconsistency)\n";
        return 2;
    }
    return 0;
}

// quad sweep over every admissible (case, a, b) pair for k = 2..k_max
int run_sweep_quad(std::uint64_t q, std::uint64_t k_max, unsigned jobs, bool with_inverses) {
    FieldCtx ctx = field_for_q(q, 2);
    std::vector<QuadFamilyParams> tuples;
    for (std::uint64_t k = 2; k <= k_max; ++k) {
        bool q_even = ctx.p() == 2;
        bool case_a = (k % 2 == 0) || q_even;
        bool case_b = !q_even && k % 2 == 1;
        for (std::uint64_t ia = 0; ia < ctx.size(); ++ia) {
            FieldElement a = ctx.element(ia);
            if (case_a) {
                for (std::uint64_t ib = 0; ib < ctx.size(); ++ib) {
                    FieldElement b = ctx.element(ib);
                    FieldElement apb = ctx.add(a, b);
                    if (ctx.is_zero(apb) || !ctx.in_subfield_q(apb)) continue;
                    tuples.push_back(make_quad_params(ctx, a, b, k, QuadCase::A));
                }
            }
            if (case_b) {
                FieldElement b = ctx.frobenius_q(a, 1);
                if (!ctx.is_zero(ctx.add(a, b))) {
                    tuples.push_back(make_quad_params(ctx, a, b, k, QuadCase::B));
                }
            }
        }
    }
    std::vector<std::string> lines(tuples.size());
    std::vector<std::uint8_t> bad(tuples.size(), 0);
    parallel_for(tuples.size(), jobs, [&](std::size_t i) {
        const QuadFamilyParams& p = tuples[i];
        QuadCriterion crit = criterion(p);
        bool actual = permutation_check(build_f(p)).bijective;
        json line;
        line["family"] = "quad";
        line["q"] = ctx.q();
        line["case"] = p.variant == QuadCase::A ? "A" : "B";
        line["a"] = ctx.to_string(p.a);
        line["b"] = ctx.to_string(p.b);
        line["k"] = p.k;
        line["criterion"] = crit.is_permutation ? "PERMUTATION" : "NOT_A_PERMUTATION";
        line["oracle"] = actual ? "PERMUTATION" : "NOT_A_PERMUTATION";
        bool consistent = crit.is_permutation == actual;
        if (with_inverses && consistent && crit.is_permutation) {
            try {
                SignResolvedInverse inv = closed_form_inverse(p);
                line["inverse_validated"] = true;
                line["sign_variant"] = inv.sign_variant;
            } catch (const std::exception&) {
                line["inverse_validated"] = false;
                consistent = false;
            }
        } else {
            line["inverse_validated"] = nullptr;
        }
        line["consistent"] = consistent;
        if (!consistent) bad[i] = 1;
        lines[i] = line.dump();
    });
    for (const auto& l : lines) std::cout << l << "\n";
    std::size_t mismatches = 0;
    for (auto b : bad) mismatches += b;
    std::cerr << "ppinv: sweep quad q=" << q << " tuples=" << tuples.size()
              << " mismatches=" << mismatches << "\n";
    return mismatches == 0 ? 0 : 2;
}

int run_sweep_aml(std::uint64_t q, std::uint32_t n, std::uint64_t m_max, unsigned jobs,
                  bool with_inverses, std::uint64_t sample, std::uint64_t seed) {
    FieldCtx ctx = field_for_q(q, n);
    std::vector<FieldElement> bs = enumerate_norm_one_b(ctx);

    struct Tuple {
        FieldElement b;
        std::uint64_t m;
        LinearizedPoly L;
    };
    std::vector<Tuple> tuples;
    if (sample == 0) {
        std::uint64_t total = 1;
        bool overflow = false;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (total > 2000000 / ctx.size()) {
                overflow = true;
                break;
            }
            total *= ctx.size();
        }
        if (overflow || bs.size() * m_max * total > 2000000) {
            throw std::invalid_argument("aml sweep: space too large to enumerate; use --sample");
        }
        std::vector<LinearizedPoly> ls;
        for (std::uint64_t v = 0; v < total; ++v) {
            std::uint64_t rest = v;
            std::vector<FieldElement> coeffs;
            for (std::uint32_t i = 0; i < n; ++i) {
                coeffs.push_back(ctx.element(rest % ctx.size()));
                rest /= ctx.size();
            }
            LinearizedPoly L = linearized(ctx, std::move(coeffs));
            if (ctx.is_zero(det(dickson(L)))) ls.push_back(L);
        }
        for (const FieldElement& b : bs) {
            for (std::uint64_t m = 1; m <= m_max; ++m) {
                for (const LinearizedPoly& L : ls) tuples.push_back(Tuple{b, m, L});
            }
        }
    } else {
        selftest_detail::SplitMix64 rng{seed};
        while (tuples.size() < sample) {
            std::vector<FieldElement> coeffs;
            for (std::uint32_t i = 0; i < n; ++i) {
                coeffs.push_back(ctx.element(rng.next() % ctx.size()));
            }
            LinearizedPoly L = linearized(ctx, std::move(coeffs));
            if (!ctx.is_zero(det(dickson(L)))) continue;
            FieldElement b = bs[rng.next() % bs.size()];
            std::uint64_t m = rng.next() % m_max + 1;
            tuples.push_back(Tuple{b, m, L});
        }
    }

    std::vector<std::string> lines(tuples.size());
    std::vector<std::uint8_t> bad(tuples.size(), 0);
    std::vector<std::uint8_t> s_nz(tuples.size(), 0), detb_nz(tuples.size(), 0),
        rank_ok(tuples.size(), 0);
    parallel_for(tuples.size(), jobs, [&](std::size_t i) {
        const Tuple& t = tuples[i];
        AmlParams p = make_aml_params(ctx, t.b, t.m, t.L);
        AmlCriterion crit = criterion(p);
        bool actual = permutation_check(build_f(p)).bijective;
        json line;
        line["family"] = "aml";
        line["q"] = ctx.q();
        line["n"] = n;
        line["b"] = ctx.to_string(t.b);
        line["m"] = t.m;
        json lj = json::array();
        for (const auto& c : t.L.coeffs) lj.push_back(ctx.to_string(c));
        line["L"] = lj;
        line["gcd_is_one"] = crit.gcd_ok;
        line["rank_D"] = crit.rank;
        line["s_nonzero"] = crit.have_alpha ? json(crit.s_nonzero) : json(nullptr);
        line["det_B_nonzero"] = crit.det_B_nonzero;
        line["criterion"] = crit.is_permutation ? "PERMUTATION" : "NOT_A_PERMUTATION";
        line["oracle"] = actual ? "PERMUTATION" : "NOT_A_PERMUTATION";
        bool consistent = crit.is_permutation == actual;
        if (with_inverses && consistent && crit.is_permutation) {
            try {
                inverse(p, crit);
                line["inverse_validated"] = true;
            } catch (const std::exception&) {
                line["inverse_validated"] = false;
                consistent = false;
            }
        } else {
            line["inverse_validated"] = nullptr;
        }
        line["consistent"] = consistent;
        if (!consistent) bad[i] = 1;
        if (crit.rank_ok) rank_ok[i] = 1;
        if (crit.rank_ok && crit.s_nonzero) s_nz[i] = 1;
        if (crit.det_B_nonzero) detb_nz[i] = 1;
        lines[i] = line.dump();
    });
    for (const auto& l : lines) std::cout << l << "\n";
    std::size_t mismatches = 0, joint = 0, s_only = 0, detb_only = 0, ranked = 0;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        mismatches += bad[i];
        if (!rank_ok[i]) continue;
        ++ranked;
        if (s_nz[i] && detb_nz[i]) ++joint;
        if (s_nz[i] && !detb_nz[i]) ++s_only;
        if (!s_nz[i] && detb_nz[i]) ++detb_only;
    }
    std::cerr << "ppinv: sweep aml q=" << q << " n=" << n << " tuples=" << tuples.size()
              << " mismatches=" << mismatches << " | rank-ok tuples " << ranked
              << ": s!=0&detB!=0 " << joint << ", s!=0 only " << s_only << ", detB!=0 only "
              << detb_only << "\n";
    return mismatches == 0 ? 0 : 2;
}

int run_main(int argc, char** argv) {
    CLI::App app{"permutation polynomial criteria, inverses and certificates"};
    app.require_subcommand(1);

    std::string field_spec;
    CLI::App* field_cmd = app.add_subcommand("field", "print the field context for p:e:n");
    field_cmd->add_option("spec", field_spec, "field spec p:e:n or p^e^n")->required();

    CLI::App* verify = app.add_subcommand("verify", "verify one instance and emit a certificate");
    verify->require_subcommand(1);
    QuadCliArgs vq;
    CLI::App* verify_quad =
        verify->add_subcommand("quad", "a x^q + b x + (x^q - x)^k over F_{q^2}");
    add_quad_options(verify_quad, vq);
    std::uint64_t cpp_q = 0;
    CLI::App* verify_cpp =
        verify->add_subcommand("cpp", "-x + x^((q^2+1)/2) + x^((q^3+q)/2) over F_{q^3}");
    verify_cpp->add_option("--q", cpp_q, "odd prime power q")->required();
    AmlCliArgs va;
    CLI::App* verify_aml = verify->add_subcommand("aml", "A(x)^m + L(x) over F_{q^n}");
    add_aml_options(verify_aml, va);

    CLI::App* invert = app.add_subcommand("invert", "emit the closed-form compositional inverse");
    invert->require_subcommand(1);
    QuadCliArgs iq;
    CLI::App* invert_quad = invert->add_subcommand("quad", "inverse of the quad family");
    add_quad_options(invert_quad, iq);
    std::uint64_t icpp_q = 0;
    CLI::App* invert_cpp = invert->add_subcommand("cpp", "inverses of f and f + x");
    invert_cpp->add_option("--q", icpp_q, "odd prime power q")->required();
    AmlCliArgs ia;
    CLI::App* invert_aml = invert->add_subcommand("aml", "inverse of the aml family");
    add_aml_options(invert_aml, ia);
    bool inv_dense = false, inv_table = false;
    for (CLI::App* c : {invert_quad, invert_cpp, invert_aml}) {
        c->add_flag("--dense", inv_dense, "append Lagrange-densified inverse coefficients");
        c->add_flag("--table", inv_table, "append the full inverse value table");
    }

    CLI::App* sweep =
        app.add_subcommand("sweep", "sweep a parameter space, one JSON line per tuple");
    sweep->require_subcommand(1);
    std::uint64_t sq_q = 0, sq_kmax = 8;
    unsigned sq_jobs = 1;
    bool sq_noinv = false;
    CLI::App* sweep_quad = sweep->add_subcommand("quad", "all admissible (case, a, b, k)");
    sweep_quad->add_option("--q", sq_q, "subfield size q")->required();
    sweep_quad->add_option("--k-max", sq_kmax, "largest k (default 8)");
    sweep_quad->add_option("--jobs", sq_jobs, "worker threads (default 1)");
    sweep_quad->add_flag("--no-inverses", sq_noinv, "skip inverse validation");
    std::uint64_t sa_q = 0, sa_mmax = 6, sa_sample = 0, sa_seed = 1;
    std::uint32_t sa_n = 0;
    unsigned sa_jobs = 1;
    bool sa_noinv = false;
    CLI::App* sweep_aml = sweep->add_subcommand("aml", "all (b, m, non-permutation L)");
    sweep_aml->add_option("--q", sa_q, "subfield size q")->required();
    sweep_aml->add_option("--n", sa_n, "extension degree n")->required();
    sweep_aml->add_option("--m-max", sa_mmax, "largest m (default 6)");
    sweep_aml->add_option("--sample", sa_sample, "sample this many tuples instead of enumerating");
    sweep_aml->add_option("--seed", sa_seed, "sampling seed (default 1)");
    sweep_aml->add_option("--jobs", sa_jobs, "worker threads (default 1)");
    sweep_aml->add_flag("--no-inverses", sa_noinv, "skip inverse validation");

    CLI::App* exp = app.add_subcommand("export", "export a value table");
    exp->require_subcommand(1);
    CLI::App* exp_sbox = exp->add_subcommand("sbox", "flat hex S-box, one value per line");
    exp_sbox->require_subcommand(1);
    QuadCliArgs xq;
    CLI::App* sbox_quad = exp_sbox->add_subcommand("quad", "quad family table");
    add_quad_options(sbox_quad, xq);
    std::uint64_t xcpp_q = 0;
    CLI::App* sbox_cpp = exp_sbox->add_subcommand("cpp", "cpp family table");
    sbox_cpp->add_option("--q", xcpp_q, "odd prime power q")->required();
    AmlCliArgs xa;
    CLI::App* sbox_aml = exp_sbox->add_subcommand("aml", "aml family table");
    add_aml_options(sbox_aml, xa);
    std::string sbox_out, sbox_map = "f";
    for (CLI::App* c : {sbox_quad, sbox_cpp, sbox_aml}) {
        c->add_option("--out", sbox_out, "output file")->required();
        c->add_option("--map", sbox_map, "which map to export: f, finv, fplusx, fplusxinv")
            ->check(CLI::IsMember({"f", "finv", "fplusx", "fplusxinv"}));
    }

    app.add_subcommand("selftest", "run the deterministic invariant suite of every module");

    CLI11_PARSE(app, argc, argv);

    if (field_cmd->parsed()) {
        std::uint32_t p, e, n;
        parse_field_spec(field_spec, p, e, n);
        FieldCtx ctx = FieldCtx::make(p, e, n, field_cap_from_env());
        std::cout << field_json(ctx).dump(2) << "\n";
        return 0;
    }
    if (app.got_subcommand("selftest")) {
        return run_selftest(std::cout);
    }
    if (verify->parsed()) {
        if (verify_quad->parsed()) {
            FieldCtx ctx = field_for_q(vq.q, 2);
            return emit_certificate(certify_quad(quad_params_from(ctx, vq), true, false));
        }
        if (verify_cpp->parsed()) {
            FieldCtx ctx = field_for_q(cpp_q, 3);
            return emit_certificate(certify_cpp(make_cpp_params(ctx), true, false));
        }
        FieldCtx ctx = field_for_q(va.q, va.n);
        return emit_certificate(certify_aml(aml_params_from(ctx, va), true, false));
    }
    if (invert->parsed()) {
        if (invert_quad->parsed()) {
            FieldCtx ctx = field_for_q(iq.q, 2);
            QuadFamilyParams params = quad_params_from(ctx, iq);
            CertificateResult r = certify_quad(params, true, false);
            bool have_inverse = r.consistent && !r.cert["inverse"].is_null();
            if (have_inverse && inv_dense) {
                SparsePoly dense = lagrange_interpolate(brute_inverse(build_f(params)));
                r.cert["inverse"]["dense"] = spoly_json(dense);
                r.cert["inverse"]["dense_equals_closed_form"] =
                    dense == closed_form_inverse(params).poly;
            }
            if (have_inverse && inv_table) {
                r.cert["inverse"]["table"] = table_json(brute_inverse(build_f(params)));
            }
            return emit_certificate(r);
        }
        if (invert_cpp->parsed()) {
            FieldCtx ctx = field_for_q(icpp_q, 3);
            CppParams P = make_cpp_params(ctx);
            CertificateResult r = certify_cpp(P, true, false);
            bool have_inverse = r.consistent && !r.cert["inverse"].is_null();
            if (have_inverse && inv_dense) {
                r.cert["inverse"]["f_inverse"]["dense"] =
                    spoly_json(lagrange_interpolate(brute_inverse(build_f(P))));
                r.cert["inverse"]["f_plus_x_inverse"]["dense"] =
                    spoly_json(lagrange_interpolate(brute_inverse(build_f_plus_x(P))));
            }
            if (have_inverse && inv_table) {
                r.cert["inverse"]["f_inverse"]["table"] = table_json(brute_inverse(build_f(P)));
                r.cert["inverse"]["f_plus_x_inverse"]["table"] =
                    table_json(brute_inverse(build_f_plus_x(P)));
            }
            return emit_certificate(r);
        }
        FieldCtx ctx = field_for_q(ia.q, ia.n);
        AmlParams params = aml_params_from(ctx, ia);
        CertificateResult r = certify_aml(params, true, false);
        bool have_inverse = r.consistent && !r.cert["inverse"].is_null();
        if (have_inverse && inv_dense) {
            r.cert["inverse"]["dense"] =
                spoly_json(lagrange_interpolate(brute_inverse(build_f(params))));
        }
        if (have_inverse && inv_table) {
            r.cert["inverse"]["table"] = table_json(brute_inverse(build_f(params)));
        }
        return emit_certificate(r);
    }
    if (sweep->parsed()) {
        if (sweep_quad->parsed()) return run_sweep_quad(sq_q, sq_kmax, sq_jobs, !sq_noinv);
        return run_sweep_aml(sa_q, sa_n, sa_mmax, sa_jobs, !sa_noinv, sa_sample, sa_seed);
    }
    if (exp->parsed()) {
        std::optional<FieldCtx> ctx;
        ValueTable table;
        if (sbox_quad->parsed()) {
            ctx.emplace(field_for_q(xq.q, 2));
            SparsePoly f = build_f(quad_params_from(*ctx, xq));
            if (sbox_map == "f") {
                table = permutation_check(f);
            } else if (sbox_map == "finv") {
                table = brute_inverse(f);
            } else {
                throw std::invalid_argument("quad export supports --map f or finv");
            }
        } else if (sbox_cpp->parsed()) {
            ctx.emplace(field_for_q(xcpp_q, 3));
            CppParams P = make_cpp_params(*ctx);
            if (sbox_map == "f") {
                table = permutation_check(build_f(P));
            } else if (sbox_map == "finv") {
                table = brute_inverse(build_f(P));
            } else if (sbox_map == "fplusx") {
                table = permutation_check(build_f_plus_x(P));
            } else {
                table = brute_inverse(build_f_plus_x(P));
            }
        } else {
            ctx.emplace(field_for_q(xa.q, xa.n));
            SparsePoly f = build_f(aml_params_from(*ctx, xa));
            if (sbox_map == "f") {
                table = permutation_check(f);
            } else if (sbox_map == "finv") {
                table = brute_inverse(f);
            } else {
                throw std::invalid_argument("aml export supports --map f or finv");
            }
        }
        table.ctx = &*ctx;
        std::ofstream out(sbox_out);
        if (!out) throw std::invalid_argument("cannot open output file: " + sbox_out);
        write_sbox_hex(table, out);
        json j;
        j["out"] = sbox_out;
        j["map"] = sbox_map;
        j["lines"] = table.image.size();
        j["bijective"] = table.bijective;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "ppinv: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "ppinv: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ppinv: internal error: " << e.what() << "\n";
        return 2;
    }
}
