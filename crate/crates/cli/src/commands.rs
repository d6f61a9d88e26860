use serde_json::json;

use sailkit_core::algebraic::{
    arnold_probe, check_invariance, default_window, dirichlet_group, fundamental_domain, markov_minimum_2d, sail_lls_period,
    validate_matrix, LinearForm,
};
use sailkit_core::contfrac::{self, Parity};
use sailkit_core::exact::{rational, JsonInt, NumberField, Poly};
use sailkit_core::intgeom::{enumerate_empty_simplices_3d, int_area, int_distance, int_length, int_sine, simplex_normal_form};
use sailkit_core::intgeom::{IntPoint, IntSimplex};
use sailkit_core::jacobiperron::{certified_error, jp_expand, jp_reconstruct, parse_elem, JpVerdict};
use sailkit_core::klein::{klein_sail, to_off, ConeSpec};
use sailkit_core::minkvor::{mv_sail, SymLatticeWindow};
use sailkit_core::planar::{self, IkeaResult, IntAngle, LlsSequence, Ray};
use sailkit_core::stats::{self, ExtRat};
use sailkit_core::{Error, IntMatrix, RealAlgebraic, Result};

use crate::output::Report;
use crate::{AngleArgs, AngleCmd, CfCmd, Cli, Command, InvariantCmd, ParityArg, StatsCmd};

pub enum Failure {
    Core(Error),
    /// A result was produced but the requested conclusion was not reached.
    Inconclusive(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub fn run(cli: &Cli) -> std::result::Result<String, Failure> {
    let json = cli.json;
    let r = match &cli.command {
        Command::Invariant(c) => invariant(c)?,
        Command::EmptySimplices { max_volume } => empty_simplices(*max_volume)?,
        Command::Cf(c) => cf(c)?,
        Command::Angle(AngleCmd::Ikea { lls, budget, require_conclusion }) => {
            let seqs = lls.iter().map(|s| LlsSequence::parse(s)).collect::<Result<Vec<_>>>()?;
            let res = planar::ikea_check_triangle(&seqs, *budget)?;
            let found = matches!(res, IkeaResult::Found { .. });
            let text = match &res {
                IkeaResult::Found { vertices } => format!("found: {}", points_text(vertices)),
                IkeaResult::NotFoundWithinBudget { budget } => format!("not found within budget {budget}"),
            };
            let r = Report::new("angle ikea").field("result", &res).text(text);
            if *require_conclusion && !found {
                return Err(Failure::Inconclusive(r.render(json)));
            }
            r
        }
        Command::Angle(c) => angle(c)?,
        Command::Klein { generators, window, off } => {
            let cone = ConeSpec::parse_generators(generators)?;
            let sail = klein_sail(&cone, *window)?;
            if *off {
                return Ok(to_off(&sail)?);
            }
            let text = format!("{} vertices, {} faces, window {}", sail.vertices.len(), sail.faces.len(), sail.window);
            Report::new("klein").field("generators", generators).merge(&sail).text(text)
        }
        Command::Mv { basis, window } => {
            let l = SymLatticeWindow::new(SymLatticeWindow::parse_basis(basis)?, *window)?;
            let s = mv_sail(&l)?;
            let text = format!("minima: {}\nnodes: {}", points_text(&s.minima), points_text(&s.nodes));
            Report::new("mv").field("basis", l.basis().iter().map(|r| r.iter().map(rational::fmt).collect::<Vec<_>>()).collect::<Vec<_>>()).merge(&s).text(text)
        }
        Command::Algebraic { matrix, window, cone, group_box, off } => {
            return algebraic(matrix, *window, *cone, *group_box, *off, json);
        }
        Command::Markov { forms, bound } => {
            if forms.len() != 2 {
                return Err(Error::Arity { expected: 2, got: forms.len() }.into());
            }
            let l1 = LinearForm::parse(&forms[0])?;
            let l2 = LinearForm::parse(&forms[1])?;
            let m = markov_minimum_2d(&l1, &l2, *bound)?;
            let text = format!("{} at {} (~{})", m.value, m.witness, m.value.approx());
            Report::new("markov").merge(&m).field("value_approx", m.value.approx()).text(text)
        }
        Command::Stats(c) => stats_cmd(c)?,
        Command::Jp { field, root, y, z, max_steps, reconstruct, require_conclusion } => {
            let k = match field {
                None => NumberField::rationals(),
                Some(p) => {
                    let poly = Poly::parse(p)?;
                    let n = RealAlgebraic::roots_of(&poly)?.len();
                    if n == 0 {
                        return Err(Error::InvalidInput(format!("{p} has no real root")).into());
                    }
                    NumberField::from_poly_root(&poly, root.unwrap_or(n - 1))?
                }
            };
            let (ey, ez) = (parse_elem(&k, y)?, parse_elem(&k, z)?);
            let e = jp_expand(&k, &ey, &ez, *max_steps)?;
            let mut r = Report::new("jp").merge(&e);
            let digits: Vec<String> = e.digits.iter().map(|(a, b)| format!("({a},{b})")).collect();
            let mut text = format!("digits: {}\nverdict: {}", digits.join(" "), verdict_text(&e.verdict));
            if let Some(n) = reconstruct {
                let a = jp_reconstruct(&e, *n)?;
                let err = certified_error(&k, &ey, &ez, &a, 128);
                text.push_str(&format!("\napproximation: ({}, {}), error <= {:e}", rational::fmt(&a[1]), rational::fmt(&a[2]), rational::to_f64(&err)));
                r = r.field(
                    "reconstruction",
                    json!({
                        "digits": n,
                        "y": rational::fmt(&a[1]),
                        "z": rational::fmt(&a[2]),
                        "error_bound": rational::fmt(&err),
                        "error_bound_approx": rational::to_f64(&err),
                    }),
                );
            }
            let r = r.text(text);
            if *require_conclusion && matches!(e.verdict, JpVerdict::Inconclusive { .. }) {
                return Err(Failure::Inconclusive(r.render(json)));
            }
            r
        }
    };
    Ok(r.render(json))
}

fn verdict_text(v: &JpVerdict) -> String {
    match v {
        JpVerdict::Terminated { steps } => format!("terminated at step {steps}"),
        JpVerdict::Periodic { preperiod, period } => format!("periodic, preperiod {preperiod}, period {period}"),
        JpVerdict::Inconclusive { steps } => format!("inconclusive after {steps} steps"),
    }
}

fn points_text(v: &[IntPoint]) -> String {
    v.iter().map(|p| format!("({p})")).collect::<Vec<_>>().join(" ")
}

fn parse_points(s: &str) -> Result<Vec<IntPoint>> {
    s.split(';').map(IntPoint::parse).collect()
}

fn invariant(c: &InvariantCmd) -> Result<Report> {
    Ok(match c {
        InvariantCmd::Length { a, b } => {
            let v = int_length(&IntPoint::parse(a)?, &IntPoint::parse(b)?)?;
            Report::new("invariant length").field("length", v).text(v.to_string())
        }
        InvariantCmd::Sine { vertex, ray1, ray2 } => {
            let v = int_sine(&IntPoint::parse(vertex)?, &IntPoint::parse(ray1)?, &IntPoint::parse(ray2)?)?;
            Report::new("invariant sine").field("sine", v).text(v.to_string())
        }
        InvariantCmd::Area { a, b, c } => {
            let v = int_area(&IntPoint::parse(a)?, &IntPoint::parse(b)?, &IntPoint::parse(c)?)?;
            Report::new("invariant area").field("area", v).text(v.to_string())
        }
        InvariantCmd::Distance { point, span } => {
            let v = int_distance(&IntPoint::parse(point)?, &parse_points(span)?)?;
            Report::new("invariant distance").field("distance", v).text(v.to_string())
        }
        InvariantCmd::Simplex { vertices } => {
            let s = IntSimplex::new(parse_points(vertices)?)?;
            let vol = s.normalized_volume()?;
            let width = s.lattice_width()?;
            let empty = s.is_empty();
            let nf = simplex_normal_form(&s)?;
            let text = format!("normalized volume {vol}, lattice width {width}, empty {empty}, normal form {nf}");
            Report::new("invariant simplex")
                .field("vertices", s.vertices())
                .field("normalized_volume", vol)
                .field("lattice_width", width)
                .field("empty", empty)
                .field("normal_form", nf)
                .text(text)
        }
    })
}

fn empty_simplices(max_volume: i64) -> Result<Report> {
    let list = enumerate_empty_simplices_3d(max_volume)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for s in &list {
        let vol = s.normalized_volume()?;
        let width = s.lattice_width()?;
        text.push_str(&format!("volume {vol} width {width}: {}\n", points_text(s.vertices())));
        rows.push(json!({ "vertices": s.vertices(), "normalized_volume": vol, "lattice_width": width }));
    }
    let all_width_one = list.iter().map(|s| s.lattice_width()).collect::<Result<Vec<_>>>()?.iter().all(|&w| w == 1);
    Ok(Report::new("empty-simplices")
        .field("max_volume", max_volume)
        .field("count", list.len())
        .field("all_width_one", all_width_one)
        .field("simplices", rows)
        .text(text))
}

fn cf(c: &CfCmd) -> Result<Report> {
    Ok(match c {
        CfCmd::Expand { value, parity, convergents } => {
            let r = rational::parse(value)?;
            let parity = match parity {
                ParityArg::Any => Parity::Any,
                ParityArg::Odd => Parity::Odd,
                ParityArg::Even => Parity::Even,
            };
            let e = contfrac::expand(&r, parity);
            let conv = contfrac::convergents(&e, *convergents)?;
            Report::new("cf expand")
                .field("value", rational::fmt(&r))
                .merge(&e)
                .field("convergents", contfrac::fmt_rats(&conv))
                .text(e.to_string())
        }
        CfCmd::Eval { cf } => {
            let e = contfrac::ContinuedFraction::parse(cf)?;
            let v = contfrac::evaluate(&e)?;
            Report::new("cf eval").field("cf", e.to_string()).field("value", &v).field("value_approx", v.approx()).text(v.to_string())
        }
        CfCmd::Quadratic { value, convergents } => {
            let a = RealAlgebraic::parse(value)?;
            let e = contfrac::expand_quadratic(&a)?;
            let conv = contfrac::convergents(&e, *convergents)?;
            Report::new("cf quadratic")
                .field("value", &a)
                .merge(&e)
                .field("convergents", contfrac::fmt_rats(&conv))
                .text(e.to_string())
        }
    })
}

fn parse_slope(s: &str) -> Result<RealAlgebraic> {
    if let Ok(a) = RealAlgebraic::parse(s) {
        return Ok(a);
    }
    let poly = Poly::parse(s)?;
    RealAlgebraic::roots_of(&poly)?.pop().ok_or_else(|| Error::InvalidInput(format!("{s} has no real root")))
}

fn build_angle(a: &AngleArgs) -> Result<IntAngle> {
    let ray2 = match (&a.ray2, &a.slope) {
        (Some(_), Some(_)) => return Err(Error::InvalidInput("give either --ray2 or --slope".into())),
        (Some(p), None) => Ray::Point(IntPoint::parse(p)?),
        (None, Some(s)) => Ray::Slope(parse_slope(s)?),
        (None, None) => return Err(Error::InvalidInput("--ray2 or --slope is required".into())),
    };
    IntAngle::new(IntPoint::parse(&a.vertex)?, Ray::Point(IntPoint::parse(&a.ray1)?), ray2)
}

fn angle(c: &AngleCmd) -> Result<Report> {
    Ok(match c {
        AngleCmd::Lls(a) => {
            let l = planar::lls(&build_angle(a)?)?;
            let ints = |v: &[_]| v.iter().map(JsonInt::from).collect::<Vec<_>>();
            Report::new("angle lls").field("lls", ints(l.head())).field("period", ints(l.period())).text(l.to_string())
        }
        AngleCmd::Itan(a) => {
            let v = planar::itan(&build_angle(a)?)?;
            Report::new("angle itan").field("itan", &v).field("itan_approx", v.approx()).text(v.to_string())
        }
        AngleCmd::Isin(a) => {
            let v = planar::isin(&build_angle(a)?)?;
            Report::new("angle isin").field("isin", v).text(v.to_string())
        }
        AngleCmd::Icos(a) => {
            let v = planar::icos(&build_angle(a)?)?;
            Report::new("angle icos").field("icos", rational::fmt(&v)).text(rational::fmt(&v))
        }
        AngleCmd::Sail { angle, window } => {
            let s = planar::angle_sail(&build_angle(angle)?, *window)?;
            Report::new("angle sail").merge(&s).text(format!("corners: {}", points_text(&s.corners)))
        }
        AngleCmd::FromLls { lls } => {
            let seq = LlsSequence::parse(lls)?;
            let a = planar::angle_from_lls(&seq)?;
            let ray = |r: &Ray| match r {
                Ray::Point(p) => json!({ "point": p }),
                Ray::Slope(s) => json!({ "slope": s }),
            };
            let text = match (a.ray1(), a.ray2()) {
                (Ray::Point(p), Ray::Point(q)) => format!("vertex ({}), rays ({p}) ({q})", a.vertex()),
                _ => format!("vertex ({}), irrational ray", a.vertex()),
            };
            Report::new("angle from-lls")
                .field("lls", seq.to_string())
                .field("vertex", a.vertex())
                .field("ray1", ray(a.ray1()))
                .field("ray2", ray(a.ray2()))
                .text(text)
        }
        AngleCmd::Ikea { .. } => unreachable!("handled by the caller"),
    })
}

fn algebraic(matrix: &str, window: Option<i64>, cone: usize, group_box: i64, off: bool, json: bool) -> std::result::Result<String, Failure> {
    let a = IntMatrix::parse(matrix)?;
    let cones = validate_matrix(&a)?;
    let count = cones.len();
    let c = cones.into_iter().nth(cone).ok_or(Error::OutOfRange { index: cone, available: count })?;
    let w = window.unwrap_or_else(|| default_window(c.dim()));
    let sail = sailkit_core::algebraic::algebraic_sail(&c, w)?;
    if off {
        return Ok(to_off(&sail)?);
    }
    let group = dirichlet_group(&a, group_box)?;
    let td = fundamental_domain(&sail, &c, &group)?;
    let arnold = arnold_probe(&td);
    let mut maps = vec![a.clone()];
    maps.extend(group.generators.iter().cloned());
    let inv = check_invariance(&c, &maps, w)?;
    let eig = c.eigenvalues()?;
    let period = if c.dim() == 2 { Some(sail_lls_period(&sail, &group)?) } else { None };
    let mut text = format!(
        "charpoly {}\ncone {} of {}, signs {:?}\ngroup: {}\nsail: {} vertices, {} faces (window {})\ntorus: V={} E={} F={} euler {}\n",
        c.charpoly().to_string_var('x'),
        cone,
        count,
        c.signs(),
        group.generators.iter().map(|g| format!("[{g}]")).collect::<Vec<_>>().join(" "),
        sail.vertices.len(),
        sail.faces.len(),
        w,
        td.vertices,
        td.edges,
        td.faces,
        td.euler_characteristic
    );
    for fc in &td.face_classes {
        text.push_str(&format!("  class {} x{}\n", fc.normal_form, fc.multiplicity));
    }
    text.push_str(&format!("invariance: {} checked, {} verified, {} skipped, {} failures\n", inv.checked, inv.verified, inv.skipped, inv.failures.len()));
    if let Some(p) = &period {
        text.push_str(&format!("lls period: {p:?}\n"));
    }
    let r = Report::new("algebraic")
        .field("matrix", &a)
        .field("charpoly", c.charpoly().to_string_var('x'))
        .field("eigenvalues", &eig)
        .field("eigenvalues_approx", eig.iter().map(|e| e.approx()).collect::<Vec<_>>())
        .field("cone", json!({ "index": cone, "count": count, "signs": c.signs() }))
        .field("window", w)
        .field("group", &group)
        .field("sail", &sail)
        .field("torus", &td)
        .field("arnold", &arnold)
        .field("invariance", &inv)
        .field("lls_period", &period)
        .text(text);
    Ok(r.render(json))
}

fn stats_cmd(c: &StatsCmd) -> Result<Report> {
    Ok(match c {
        StatsCmd::Gk { k } => {
            let p = stats::gk_probability(*k)?;
            let cr = stats::cross_ratio(&ExtRat::int(-1), &ExtRat::int(0), &ExtRat::int(*k as i64), &ExtRat::int(*k as i64 + 1))?;
            Report::new("stats gk").field("k", k).field("cross_ratio", &cr).field("probability_approx", p).text(format!("{p}"))
        }
        StatsCmd::Telescoping { k } => {
            let r = stats::telescoping_check(*k)?;
            Report::new("stats telescoping").field("k", k).field("residual_approx", r).text(format!("{r:e}"))
        }
        StatsCmd::CrossRatio { points } => {
            let p = points.split(',').map(|s| s.parse::<ExtRat>()).collect::<Result<Vec<_>>>()?;
            if p.len() != 4 {
                return Err(Error::Arity { expected: 4, got: p.len() });
            }
            let v = stats::cross_ratio(&p[0], &p[1], &p[2], &p[3])?;
            Report::new("stats cross-ratio").field("points", &p).field("value", &v).text(v.to_string())
        }
        StatsCmd::Empirical { qmax, kmax } => {
            let h = stats::empirical_digits_with(*qmax, *kmax)?;
            let shown = (*kmax).min(10);
            let mut text = format!("{} digits from {}\n", h.total, h.source);
            let mut cmp = Vec::new();
            for k in 1..=shown {
                let g = stats::gk_probability(k as u64)?;
                text.push_str(&format!("k={k}: {} ({:.6} vs {:.6})\n", h.count(k), h.frequency(k), g));
                cmp.push(json!({ "k": k, "frequency_approx": h.frequency(k), "gk_probability_approx": g }));
            }
            Report::new("stats empirical").merge(&h).field("comparison", cmp).text(text)
        }
        StatsCmd::FaceCensus { dim, gen_bound, samples, seed } => {
            let fc = stats::face_census(*dim, *gen_bound, *samples, *seed)?;
            let mut text = format!(
                "{} cones ({} skipped): {} faces at distance 1, {} above\n",
                fc.cones, fc.skipped, fc.faces_distance_one, fc.faces_distance_above_one
            );
            for (k, v) in &fc.classes {
                text.push_str(&format!("  {k} x{v}\n"));
            }
            Report::new("stats face-census").merge(&fc).text(text)
        }
    })
}
