//! End-to-end pipeline over the public API: parse a graph, compute the
//! bound hierarchy, build certificates for every scheme, verify them, and
//! round-trip the serialized artifacts.

use icx_core::code::{self, BuildOptions};
use icx_core::gic;
use icx_core::lps::{self, FamilyPolicy, SubsetFamily};
use icx_core::oracles::{self, OracleLimits};
use icx_core::rat::{rint, Rat};
use icx_core::sig;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn sig_to_bounds_to_certificates() {
    let text = "# pentagon\nn 5\nundirected\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n";
    let g = sig::parse_sig(text).unwrap();
    let limits = OracleLimits::default();

    let cliques = oracles::enumerate_cliques(&g, None, &limits).unwrap();
    let fam = SubsetFamily::all_subsets(&g);
    let fcc = lps::fcc(&g, &cliques).unwrap().value;
    let lp = lps::local_partial_lp(&g, &fam).unwrap().value;
    assert_eq!(fcc, lp);

    for scheme in ["clique-cover", "local-partial", "recursive"] {
        let cert = match scheme {
            "clique-cover" => {
                code::build_clique_cover_code(&g, &limits, &BuildOptions::default()).unwrap()
            }
            "local-partial" => {
                code::build_local_partial_code(&g, &fam, &BuildOptions::default()).unwrap()
            }
            _ => code::build_recursive_code(
                &g,
                FamilyPolicy::AllSubsets,
                2,
                &limits,
                &BuildOptions::default(),
            )
            .unwrap(),
        };
        assert!(cert.verified, "{scheme} certificate must verify");
        assert_eq!(cert.rate, fcc, "{scheme} certificate rate");
        let json = serde_json::to_string(&cert).unwrap();
        let back: code::CodeCertificate = serde_json::from_str(&json).unwrap();
        assert!(code::verify_certificate(&g, &back, 20, 3).unwrap().passed());
    }

    // Round-trip the graph itself.
    assert_eq!(sig::parse_sig(&sig::write_sig(&g)).unwrap(), g);
}

#[test]
fn every_scheme_stays_inside_the_sandwich() {
    let limits = OracleLimits::default();
    let mut rng = StdRng::seed_from_u64(515);
    for _ in 0..8 {
        let n = rng.random_range(3..=6);
        let g = icx_core::gen::random_digraph(n, 0.45, rng.random());
        let mais = rint(oracles::mais(&g, &limits).unwrap() as i64);
        let cliques = oracles::enumerate_cliques(&g, None, &limits).unwrap();
        let fcc = lps::fcc(&g, &cliques).unwrap().value;
        let fam = SubsetFamily::all_subsets(&g);

        let mut rates: Vec<(&str, Rat)> = Vec::new();
        let cert = code::build_local_partial_code(&g, &fam, &BuildOptions::default()).unwrap();
        rates.push(("local-partial", cert.rate));
        let cert =
            code::build_clique_cover_code(&g, &limits, &BuildOptions::default()).unwrap();
        rates.push(("clique-cover", cert.rate));
        if let Some(s) = gic::whole_graph_gic(&g) {
            let p = icx_core::gf::next_prime(g.n() as u64);
            let cert = gic::gic_certificate(&g, &s, p, 1).unwrap();
            assert!(code::verify_certificate(&g, &cert, 20, 1).unwrap().passed());
            rates.push(("gic", cert.rate));
        }
        for (scheme, rate) in rates {
            assert!(mais <= rate, "{scheme} rate below MAIS");
            if scheme != "gic" {
                assert!(rate <= fcc, "{scheme} rate {rate} above fcc {fcc}");
            }
        }
    }
}
