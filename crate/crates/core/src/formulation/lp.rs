//! CPLEX-style LP text output.

use std::fmt::Write;

use super::{Domain, MipModel, VarIndex};

fn write_terms(out: &mut String, model: &MipModel, terms: &[(VarIndex, f64)]) {
    if terms.is_empty() {
        out.push('0');
        return;
    }
    for (k, &(i, coef)) in terms.iter().enumerate() {
        let name = model.variables()[i.0].name();
        let magnitude = coef.abs();
        match (k, coef.is_sign_negative()) {
            (0, false) => write!(out, "{magnitude} {name}"),
            (0, true) => write!(out, "-{magnitude} {name}"),
            (_, false) => write!(out, " + {magnitude} {name}"),
            (_, true) => write!(out, " - {magnitude} {name}"),
        }
        .unwrap();
    }
}

fn number(x: f64) -> f64 {
    // no "-0" in the output
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Renders `model` in LP format. Constraints are named `c1..cK` in build
/// order; numbers use the shortest decimal that round-trips.
pub fn export_lp(model: &MipModel) -> String {
    let mut out = String::new();
    out.push_str("Maximize\n obj: ");
    write_terms(&mut out, model, model.objective());
    out.push_str("\nSubject To\n");
    for (k, c) in model.constraints().iter().enumerate() {
        write!(out, " c{}: ", k + 1).unwrap();
        write_terms(&mut out, model, &c.terms);
        writeln!(out, " {} {}", c.sense, number(c.rhs)).unwrap();
    }
    out.push_str("Bounds\n");
    for var in model.variables() {
        if let Domain::Continuous { lower, upper } = var.domain {
            writeln!(out, " {} <= {} <= {}", number(lower), var.name(), number(upper)).unwrap();
        }
    }
    out.push_str("Binaries\n");
    for var in model.variables() {
        if var.domain == Domain::Binary {
            writeln!(out, " {}", var.name()).unwrap();
        }
    }
    out.push_str("End\n");
    out
}
