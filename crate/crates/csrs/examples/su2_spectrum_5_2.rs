//! Reproduce the -cs table of S³_{-1/2}(5₂) end to end.
//!
//! Run with: cargo run --release --example su2_spectrum_5_2

use csrs::csintegrator::cs_spectrum;
use csrs::numerics::PrecisionPolicy;
use csrs::presentations::builtin_5_2;
use csrs::repfinder::{builtin_apoly_5_2, casson_count_check, find_representations, SurgerySpec};
use csrs::riley::{
    alexander_specialization, longitude_eigenvalue_poly, riley_polynomial,
    second_derivative_at_one,
};

fn main() {
    let started = std::time::Instant::now();
    let pres = builtin_5_2();
    let policy = PrecisionPolicy::from_target_str("1e-30", None, 3).unwrap();

    let rd = riley_polynomial(&pres, &policy).unwrap();
    println!("phi(t,u) = {}", rd.phi.display("s", "u"));
    let delta = alexander_specialization(&rd).unwrap();
    println!("Delta(t) = {}", csrs::riley::display_in_t(&delta));

    let spec = SurgerySpec::new(-2).unwrap();
    let reps =
        find_representations(&pres, &rd, &builtin_apoly_5_2(), spec, &policy).unwrap();
    let verdict =
        casson_count_check(&second_derivative_at_one(&delta), spec, reps.len() as u64);
    println!(
        "{} SU(2) classes (casson lambda = {}, gate: {})",
        reps.len(),
        verdict.lambda,
        if verdict.pass { "pass" } else { "FAIL" }
    );

    let lambda11 = longitude_eigenvalue_poly(&pres);
    let spectrum = cs_spectrum(&rd, &lambda11, &reps, spec.n, &[], &policy, true).unwrap();
    for (cid, v, _) in &spectrum {
        let rep = &reps[*cid];
        println!(
            "rho_{}: t = {:+.6}{:+.6}i  u = {:+.6}  eps = {:+}  -cs = {}",
            cid + 1,
            rep.t.re().to_f64(),
            rep.t.im().to_f64(),
            rep.u.re().to_f64(),
            rep.epsilon,
            v.value_mod_1.to_string_radix(10, Some(12)),
        );
    }
    println!("total: {:?}", started.elapsed());
}
