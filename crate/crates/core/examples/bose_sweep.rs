//! Commutator residuals of the bosonic exponential forms versus truncation.

use su11_core::algebra::{check_commutators, CheckSpec};
use su11_core::reps::saf_bose_form;
use su11_core::{BoseForm, Complex64};

fn main() {
    let p0 = Complex64::new(0.7, 0.4);
    for form in [BoseForm::Form1, BoseForm::Form2] {
        for dim in [32, 48, 64, 96, 128, 160] {
            let triple = saf_bose_form(p0, dim, form).expect("valid dims");
            let spec = CheckSpec::new(dim / 4, 1.0).expect("tolerance");
            let report = check_commutators(&triple, &spec).expect("margin fits");
            let residuals: Vec<String> = report.checks().iter().map(|c| format!("{:.3e}", c.residual)).collect();
            println!("{form} dim {dim:>4}: {}", residuals.join("  "));
        }
    }
}
