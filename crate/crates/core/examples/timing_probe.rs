use qdouble::fixtures;
use qdouble::koszul::*;

fn main() {
    let t0 = std::time::Instant::now();
    let dd = fixtures::sl2_fund_double();
    for (name, m) in [
        ("trivial", trivial_module(&dd, 4)),
        ("twodim", two_dim_module(&dd, 4)),
        ("adjoint", adjoint_module(&dd, 4)),
    ] {
        let t = std::time::Instant::now();
        let results = roundtrip_check(&dd, &m, 4, 2).unwrap();
        let bad: Vec<_> = results.iter().filter(|(_, l, r)| l != r).collect();
        println!(
            "sl2 {name}: {} blocks, {} mismatches, {:?}",
            results.len(),
            bad.len(),
            t.elapsed()
        );
        assert!(bad.is_empty(), "{bad:?}");
    }
    println!("total {:?}", t0.elapsed());
}
