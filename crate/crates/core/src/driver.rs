/*! Shared command dispatch for the CLI and the Python bindings. */

use std::sync::Arc;

use crate::cat::{self, Obj};
use crate::construct;
use crate::fib::{Cleavage, FibrationData};
use crate::format::{self, Document, Entity};
use crate::report::{Check, Report};
use crate::{analyze, moens};

/// Decides one named property of a fibration and packages the verdict.
pub fn check_property(
    fib: &Arc<FibrationData>,
    property: &str,
    at: Option<usize>,
    cap: usize,
) -> Result<Report, String> {
    let mut report = Report::new(format!("check {property}"));
    let check = match property {
        "fibration" => Check::new("fibration", fib.verdict()).witness(fib.lift_table()),
        "shape" => Check::new("shape", analyze::classify_shape(fib)),
        "representable" => match analyze::is_representable(fib) {
            Ok(r) => Check::new("representable", &r),
            Err(e) => Check::new("representable", false).counterexample(e.to_string()),
        },
        "locally-small" => {
            let r = analyze::is_locally_small(fib);
            let mut c = Check::new("locally-small", r.locally_small);
            if let Some(ce) = &r.counterexample {
                c = c.counterexample(ce);
            }
            c
        }
        "well-powered" => Check::new("well-powered", analyze::is_well_powered(fib)),
        "sums" => Check::new("sums", analyze::has_internal_sums(fib)),
        "products" => Check::new("products", analyze::has_internal_products(fib)),
        "sums-profile" => Check::new("sums-profile", analyze::sums_profile(fib)),
        "global-sections" => Check::new("global-sections", analyze::has_small_global_sections(fib)),
        "finite-limits" => Check::new("finite-limits", analyze::finite_limit_profile(fib)),
        "geometric" => Check::new("geometric", analyze::is_geometric(fib)),
        "split" => {
            let cl = Cleavage::canonical(fib).map_err(|e| e.to_string())?;
            Check::new("split", cl.check_split())
        }
        "generating" => {
            let g = Obj(at.ok_or("pass an object id for the candidate family")?);
            Check::new("generating", analyze::is_generating_family(fib, g))
        }
        "separator" => Check::new("separator", analyze::find_separator(fib)),
        "small" => Check::new("small", analyze::is_small_fibration(fib, cap)),
        other => return Err(format!("unknown property `{other}`")),
    };
    report.push(check);
    Ok(report)
}

/// Runs a named construction over document blocks; the report carries the
/// construction name, its inputs, and the resulting document text.
pub fn run_construction(
    doc: &Document,
    kind: &str,
    names: &[String],
    at: Option<usize>,
    cap: usize,
) -> Result<Report, String> {
    run_construction_with(doc, kind, names, at, cap, 8)
}

/// As [`run_construction`], with the localization zigzag cap explicit.
pub fn run_construction_with(
    doc: &Document,
    kind: &str,
    names: &[String],
    at: Option<usize>,
    cap: usize,
    zigzag_cap: usize,
) -> Result<Report, String> {
    let mut out_doc = Document::default();
    let mut report = Report::new(format!("construct {kind}"));
    let category = |ix: usize| -> Result<Arc<cat::FinCat>, String> {
        let n = names.get(ix).ok_or("missing block name")?;
        doc.category(n).cloned().ok_or_else(|| format!("no category named `{n}`"))
    };
    let functor = |ix: usize| -> Result<cat::FunctorData, String> {
        let n = names.get(ix).ok_or("missing block name")?;
        doc.functor(n).cloned().ok_or_else(|| format!("no functor named `{n}`"))
    };
    let fibration = |ix: usize| -> Result<Arc<FibrationData>, String> {
        let n = names.get(ix).ok_or("missing block name")?;
        doc.fibration(n).cloned().ok_or_else(|| format!("no fibration named `{n}`"))
    };
    let intern_fibration = |d: &mut Document, hint: &str, f: &Arc<FibrationData>| {
        d.intern_category(&format!("{hint}_total"), f.total());
        d.intern_category(&format!("{hint}_base"), f.base());
        d.insert(hint, Entity::Fibration(f.clone()));
    };
    match kind {
        "opposite-category" => {
            let c = category(0)?;
            out_doc.insert("opposite", Entity::Category(Arc::new(cat::opposite_category(&c))));
        }
        "product" => {
            let p = cat::product_category(&category(0)?, &category(1)?);
            out_doc.insert("product", Entity::Category(p.cat));
        }
        "arrow" => {
            let a = cat::arrow_category(&category(0)?);
            out_doc.insert("arrow_cat", Entity::Category(a.cat));
        }
        "slice" => {
            let s = cat::slice_category(&category(0)?, Obj(at.ok_or("pass an object id")?))
                .map_err(|e| e.to_string())?;
            out_doc.insert("slice", Entity::Category(s.cat));
        }
        "coslice" => {
            let s = cat::coslice_category(&category(0)?, Obj(at.ok_or("pass an object id")?))
                .map_err(|e| e.to_string())?;
            out_doc.insert("coslice", Entity::Category(s.cat));
        }
        "karoubi" => {
            let (k, incl) = cat::split_idempotents(&category(0)?);
            out_doc.intern_category("source", &incl.source);
            out_doc.insert("karoubi", Entity::Category(k));
            out_doc.insert("inclusion", Entity::Functor(incl));
        }
        "grothendieck" => {
            let n = names.first().ok_or("missing block name")?;
            let h = doc.indexed(n).ok_or_else(|| format!("no indexed block named `{n}`"))?;
            let g = construct::grothendieck(h).map_err(|e| e.to_string())?;
            intern_fibration(&mut out_doc, "total_fibration", &g.fib);
        }
        "fundamental" => {
            let f = construct::fundamental_fibration(&category(0)?).map_err(|e| e.to_string())?;
            intern_fibration(&mut out_doc, "fundamental", &f.fib);
        }
        "externalize" => {
            let n = names.first().ok_or("missing block name")?;
            let c = doc.internal(n).ok_or_else(|| format!("no internal block named `{n}`"))?;
            let e = construct::externalize(c).map_err(|e| e.to_string())?;
            intern_fibration(&mut out_doc, "externalisation", &e.fib);
        }
        "change-of-base" => {
            let cb = construct::change_of_base(&fibration(0)?, &functor(1)?);
            intern_fibration(&mut out_doc, "pulled_back", &cb.fib);
        }
        "glueing" => {
            let gl = construct::glueing(&functor(0)?).map_err(|e| e.to_string())?;
            intern_fibration(&mut out_doc, "glueing", &gl.fib);
        }
        "product-fibration" => {
            let pr = construct::product_fibration(&fibration(0)?, &fibration(1)?);
            intern_fibration(&mut out_doc, "product_fibration", &pr.fib);
        }
        "diagram" => {
            let d = construct::diagram_fibration(&fibration(0)?, &category(1)?, cap)
                .ok_or("search cap exceeded")?;
            intern_fibration(&mut out_doc, "diagram_fibration", &d.fib);
            report.push(Check::new("pd-is-fibration", d.pd_is_fibration));
        }
        "exponential" => {
            let e = construct::exponential_fibration(&fibration(0)?, &fibration(1)?, cap)
                .ok_or("search cap exceeded")?;
            intern_fibration(&mut out_doc, "exponential", &e.groth.fib);
            report.push(Check::new("fibre-sizes", &e.fibre_sizes));
        }
        "fam" => {
            let fam = construct::fam_fibration(&fibration(0)?).map_err(|e| e.to_string())?;
            intern_fibration(&mut out_doc, "fam", &fam.fib);
        }
        "opposite-fibration" => {
            let p = fibration(0)?;
            let cl = Cleavage::canonical(&p).map_err(|e| e.to_string())?;
            let op = construct::opposite_fibration(&p, &cl);
            intern_fibration(&mut out_doc, "opposite_fibration", &op.fib);
        }
        "split-right" => {
            let p = fibration(0)?;
            let sp = construct::split_right(&p, cap).ok_or("search cap exceeded")?;
            intern_fibration(&mut out_doc, "split_right", &sp.groth.fib);
            report.push(Check::new("fibre-sizes", &sp.fibre_sizes));
        }
        "split-left" => {
            let p = fibration(0)?;
            let cl = Cleavage::canonical(&p).map_err(|e| e.to_string())?;
            let l = construct::split_left(&p, &cl);
            intern_fibration(&mut out_doc, "split_left", &l.groth.fib);
        }
        "pi" => {
            // right adjoint to change of base: ∏_F(P) for F = names[0], P = names[1]
            let f = functor(0)?;
            let p = fibration(1)?;
            let g = moens::pi_f(&f, &p, cap).map_err(|e| e.to_string())?;
            intern_fibration(&mut out_doc, "pi_f", &g.fib);
        }
        "sum-fibre" => {
            // one fibre of ∐_F(P): the localized pullback at the base
            // object passed through `at`
            let f = functor(0)?;
            let p = fibration(1)?;
            let i = Obj(at.ok_or("pass the base object id")?);
            let s = moens::sigma_f_fibre(&f, &p, i, zigzag_cap).map_err(|e| e.to_string())?;
            out_doc.insert("sum_fibre", Entity::Category(s.cat.clone()));
        }
        other => return Err(format!("unknown construction `{other}`")),
    }
    report.push(Check::new("construction", kind).witness(names).witness(format::print(&out_doc)));
    Ok(report)
}

/// Classifies a named adjunction; `Err` carries usage problems, the report
/// carries the profile (or the left-exactness failure).
pub fn classify_gm(doc: &Document, name: &str) -> Result<(Report, bool), String> {
    let adj = doc.adjunction(name).ok_or_else(|| format!("no adjunction named `{name}`"))?;
    let mut report = Report::new("classify-gm");
    match moens::gm_classify(adj) {
        Ok(profile) => {
            let divergent = profile.any_divergent();
            report.push(Check::new("geometric-profile", &profile));
            Ok((report, divergent))
        }
        Err(e) => {
            report.push(Check::new("geometric-profile", false).counterexample(e.to_string()));
            Ok((report, false))
        }
    }
}

/// Runs the reconstruction commands over a named fibration.
pub fn run_moens(doc: &Document, name: &str, general: bool) -> Result<Report, String> {
    let fib = doc.fibration(name).ok_or_else(|| format!("no fibration named `{name}`"))?;
    let mut report = Report::new(if general { "moens --general" } else { "moens" });
    if general {
        match moens::gen_moens(fib) {
            Ok(v) => report.push(
                Check::new("gen-moens", &v)
                    .witness(name)
                    .crosscheck("conditions-agree", (v.cond1, v.cond2), (v.cond2, v.cond3)),
            ),
            Err(e) => report.push(Check::new("gen-moens", false).counterexample(e.to_string())),
        }
    } else {
        match moens::moens_reconstruct(fib) {
            Ok((v, _, _)) => report
                .push(Check::new("moens", v.equivalence).witness(name).witness(v.gl_fibre_sizes)),
            Err(e) => report.push(Check::new("moens", false).counterexample(e.to_string())),
        }
    }
    Ok(report)
}
