//! Axiom checklists for manifolds of type H₁/Hₘ, F-manifolds and Frobenius manifolds,
//! plus the Lenard frame and the multiplication it induces.

use std::fmt;

use thiserror::Error;

use crate::expr::{sum, RationalExpr};
use crate::geom::{
    coaction, covariant_derivative_vector, exterior_derivative, haantjes_tensor, inverse,
    lie_derivative, mult_apply, nabla_c_residual, riemann, tensor11_commutator, Chart, GeomError,
    Metric, OneForm, Residual, Tensor03, Tensor11, Tensor12, Tensor13, VectorField,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("a manifold spec needs at least one recursion operator")]
    EmptyChain,
    #[error("expected {expected} recursion operators, spec has {got}")]
    ChainLength { expected: usize, got: usize },
    #[error("Lenard frame is degenerate (X, KX, ... are linearly dependent)")]
    DegenerateFrame,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Data `(X, θ, K₁…Kₘ)` on a chart, with optional metric and potential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldSpec {
    chart: Chart,
    x: VectorField,
    theta: OneForm,
    ks: Vec<Tensor11>,
    metric: Option<Metric>,
    potential: Option<RationalExpr>,
}

impl ManifoldSpec {
    pub fn new(x: VectorField, theta: OneForm, ks: Vec<Tensor11>) -> Result<Self, VerifyError> {
        if ks.is_empty() {
            return Err(VerifyError::EmptyChain);
        }
        let chart = x.chart().clone();
        chart.same(theta.chart())?;
        for k in &ks {
            chart.same(k.chart())?;
        }
        Ok(ManifoldSpec {
            chart,
            x,
            theta,
            ks,
            metric: None,
            potential: None,
        })
    }

    pub fn with_metric(mut self, g: Metric) -> Result<Self, VerifyError> {
        self.chart.same(g.chart())?;
        self.metric = Some(g);
        Ok(self)
    }

    pub fn with_potential(mut self, f: RationalExpr) -> Result<Self, VerifyError> {
        self.potential = Some(self.chart.adopt(f)?);
        Ok(self)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn x(&self) -> &VectorField {
        &self.x
    }

    pub fn theta(&self) -> &OneForm {
        &self.theta
    }

    /// `K₁…Kₘ`; the identity `K₀` is implicit.
    pub fn ks(&self) -> &[Tensor11] {
        &self.ks
    }

    pub fn m(&self) -> usize {
        self.ks.len()
    }

    pub fn metric(&self) -> Option<&Metric> {
        self.metric.as_ref()
    }

    pub fn potential(&self) -> Option<&RationalExpr> {
        self.potential.as_ref()
    }

    /// `K_j` with `K₀ = Id`.
    pub fn operator(&self, j: usize) -> Tensor11 {
        if j == 0 {
            Tensor11::identity(&self.chart)
        } else {
            self.ks[j - 1].clone()
        }
    }

    /// The same data keeping only `K₁…K_m`.
    pub fn truncated(&self, m: usize) -> Result<Self, VerifyError> {
        if m == 0 {
            return Err(VerifyError::EmptyChain);
        }
        if m > self.m() {
            return Err(VerifyError::ChainLength {
                expected: m,
                got: self.m(),
            });
        }
        let mut out = self.clone();
        out.ks.truncate(m);
        Ok(out)
    }
}

/// First nonzero component of a failing residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub expr: RationalExpr,
}

/// One line of a report. It fails exactly when it carries a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomEntry {
    pub label: String,
    pub witness: Option<Witness>,
}

impl AxiomEntry {
    fn from_residual(label: impl Into<String>, r: &impl Residual) -> Self {
        AxiomEntry {
            label: label.into(),
            witness: r
                .first_nonzero()
                .map(|(indices, expr)| Witness { indices, expr }),
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub structure: String,
    pub axioms: Vec<AxiomEntry>,
    /// Consequences reported alongside the axioms; they never decide the verdict.
    pub derived: Vec<AxiomEntry>,
}

impl CheckReport {
    pub fn new(structure: &str) -> Self {
        CheckReport {
            structure: structure.to_string(),
            axioms: Vec::new(),
            derived: Vec::new(),
        }
    }

    fn push(&mut self, label: impl Into<String>, r: &impl Residual) {
        self.axioms.push(AxiomEntry::from_residual(label, r));
    }

    pub fn passed(&self) -> bool {
        self.axioms.iter().all(AxiomEntry::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomEntry> {
        self.axioms.iter().filter(|a| !a.passed())
    }

    pub fn entry(&self, label: &str) -> Option<&AxiomEntry> {
        self.axioms
            .iter()
            .chain(self.derived.iter())
            .find(|a| a.label == label)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.structure)?;
        let line = |f: &mut fmt::Formatter<'_>, tag: &str, a: &AxiomEntry| match &a.witness {
            None => writeln!(f, "  {tag}pass  {}", a.label),
            Some(w) => writeln!(
                f,
                "  {tag}FAIL  {}  at {:?}: {}",
                a.label, w.indices, w.expr
            ),
        };
        for a in &self.axioms {
            line(f, "", a)?;
        }
        for a in &self.derived {
            line(f, "(derived) ", a)?;
        }
        Ok(())
    }
}

fn op_name(j: usize) -> String {
    if j == 0 {
        "Id".into()
    } else {
        format!("K{j}")
    }
}

/// `K_j K_l θ`, the operators acting on forms right to left.
fn chain_form(spec: &ManifoldSpec, j: usize, l: usize) -> OneForm {
    let inner = coaction(&spec.operator(l), spec.theta()).expect("spec shares one chart");
    coaction(&spec.operator(j), &inner).expect("spec shares one chart")
}

/// The six conditions defining an H₁ manifold, using `K = K₁`, plus closedness of `K²θ`.
pub fn check_h1(spec: &ManifoldSpec) -> CheckReport {
    let k = &spec.ks()[0];
    let x = spec.x();
    let theta = spec.theta();
    let k_theta = coaction(k, theta).expect("same chart");
    let mut r = CheckReport::new("H1");
    r.push("Haantjes(K) = 0", &haantjes_tensor(k));
    r.push("d(theta) = 0", &exterior_derivative(theta));
    r.push("d(K theta) = 0", &exterior_derivative(&k_theta));
    let torsion = crate::geom::nijenhuis_torsion(k);
    r.push(
        "theta(Torsion(K)) = 0",
        &crate::geom::contract_form_vv2form(theta, &torsion).expect("same chart"),
    );
    r.push("Lie_X(K) = 0", &lie_derivative(x, k).expect("same chart"));
    r.push(
        "Lie_X(theta) = 0",
        &lie_derivative(x, theta).expect("same chart"),
    );
    let k2_theta = coaction(k, &k_theta).expect("same chart");
    r.derived.push(AxiomEntry::from_residual(
        "d(K^2 theta) = 0",
        &exterior_derivative(&k2_theta),
    ));
    r
}

/// Hₘ axioms over all `0 ≤ j, l ≤ m` with `K₀ = Id`.
///
/// Commutators are listed for `j < l`. Closedness is listed for `j ≤ l`, and also for the
/// reversed product when `K_j` and `K_l` do not commute (only then is it a different form).
pub fn check_hm(spec: &ManifoldSpec, m: usize) -> Result<CheckReport, VerifyError> {
    if spec.m() != m {
        return Err(VerifyError::ChainLength {
            expected: m,
            got: spec.m(),
        });
    }
    let ops: Vec<Tensor11> = (0..=m).map(|j| spec.operator(j)).collect();
    let mut r = CheckReport::new(&format!("H{m}"));
    for (j, k) in ops.iter().enumerate() {
        r.push(format!("Haantjes({}) = 0", op_name(j)), &haantjes_tensor(k));
    }
    let mut commuting = vec![vec![true; m + 1]; m + 1];
    for j in 0..=m {
        for l in (j + 1)..=m {
            let c = tensor11_commutator(&ops[j], &ops[l]).expect("same chart");
            commuting[j][l] = c.is_zero();
            r.push(format!("[{}, {}] = 0", op_name(j), op_name(l)), &c);
        }
    }
    for j in 0..=m {
        for l in j..=m {
            let mut orders = vec![(j, l)];
            if !commuting[j][l] {
                orders.push((l, j));
            }
            for (a, b) in orders {
                let form = chain_form(spec, a, b);
                r.push(
                    format!("d({} {} theta) = 0", op_name(a), op_name(b)),
                    &exterior_derivative(&form),
                );
            }
        }
    }
    for (j, k) in ops.iter().enumerate() {
        r.push(
            format!("Lie_X({}) = 0", op_name(j)),
            &lie_derivative(spec.x(), k).expect("same chart"),
        );
    }
    r.push(
        "Lie_X(theta) = 0",
        &lie_derivative(spec.x(), spec.theta()).expect("same chart"),
    );
    Ok(r)
}

/// One member `K_j K_l θ` of the chain of 1-forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainForm {
    pub j: usize,
    pub l: usize,
    pub form: OneForm,
    pub closed: AxiomEntry,
}

/// All `K_j K_l θ` with `0 ≤ j ≤ l ≤ m`, each with its closedness verdict.
pub fn lenard_oneforms(spec: &ManifoldSpec) -> Vec<ChainForm> {
    let m = spec.m();
    let mut out = Vec::new();
    for j in 0..=m {
        for l in j..=m {
            let form = chain_form(spec, j, l);
            let label = format!("d({} {} theta) = 0", op_name(j), op_name(l));
            let closed = AxiomEntry::from_residual(label, &exterior_derivative(&form));
            out.push(ChainForm { j, l, form, closed });
        }
    }
    out
}

/// `X_j = K^j X` for `j < n`, with the dual coframe when the fields are independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LenardFrame {
    pub fields: Vec<VectorField>,
    pub determinant: RationalExpr,
    pub coframe: Option<Vec<OneForm>>,
}

impl LenardFrame {
    pub fn is_valid(&self) -> bool {
        self.coframe.is_some()
    }
}

/// Frame generated by `K = K₁` from `X`.
pub fn lenard_frame(spec: &ManifoldSpec) -> LenardFrame {
    let c = spec.chart();
    let n = c.dim();
    let k = &spec.ks()[0];
    let mut fields = vec![spec.x().clone()];
    for _ in 1..n {
        let next = k.apply(fields.last().unwrap()).expect("same chart");
        fields.push(next);
    }
    // columns are the fields
    let m: Vec<Vec<RationalExpr>> = (0..n)
        .map(|i| fields.iter().map(|f| f[[i]].clone()).collect())
        .collect();
    let determinant = crate::geom::determinant(&m, c.coords());
    let coframe = if determinant.is_zero() {
        None
    } else {
        let inv = inverse(&m, c.coords()).expect("nonzero determinant");
        Some(
            inv.into_iter()
                .map(|row| OneForm::new(c, row).expect("n components"))
                .collect(),
        )
    };
    LenardFrame {
        fields,
        determinant,
        coframe,
    }
}

/// Multiplication `C = Σ_l ε^l ⊗ K^l` built from a valid frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMultiplication {
    /// Symmetrized in the lower indices.
    pub c: Tensor12,
    /// First asymmetric component `C^i_{jk} − C^i_{kj}` before symmetrization.
    pub symmetry_defect: Option<Witness>,
}

pub fn multiplication_from_chain(
    frame: &LenardFrame,
    k: &Tensor11,
) -> Result<ChainMultiplication, VerifyError> {
    let coframe = frame.coframe.as_ref().ok_or(VerifyError::DegenerateFrame)?;
    let c = k.chart();
    c.same(coframe[0].chart())?;
    let n = c.dim();
    let powers: Vec<Tensor11> = (0..n as u32).map(|l| k.pow(l)).collect();
    let raw = Tensor12::from_fn(c, |ix| {
        let (i, j, kk) = (ix[0], ix[1], ix[2]);
        sum(
            c.coords(),
            (0..n).map(|l| &coframe[l][[j]] * &powers[l][[i, kk]]),
        )
    });
    let symmetry_defect = raw
        .symmetry_defect()
        .map(|(indices, expr)| Witness { indices, expr });
    let c = if symmetry_defect.is_some() {
        raw.symmetrized()
    } else {
        raw
    };
    Ok(ChainMultiplication { c, symmetry_defect })
}

/// `(V ∘ T)^i_{jk} = C^i_{ab} V^a T^b_{jk}`.
fn left_mult(c: &Tensor12, v: &VectorField, t: &Tensor12) -> Tensor12 {
    let ch = c.chart();
    let n = ch.dim();
    // M^i_b = C^i_{ab} V^a
    let m: Vec<RationalExpr> = (0..n * n)
        .map(|ib| {
            sum(
                ch.coords(),
                (0..n).map(|a| &c[[ib / n, a, ib % n]] * &v[[a]]),
            )
        })
        .collect();
    Tensor12::from_fn(ch, |ix| {
        sum(
            ch.coords(),
            (0..n).map(|b| &m[ix[0] * n + b] * &t[[b, ix[1], ix[2]]]),
        )
    })
}

/// `(T ∘ V)^i_{jk} = C^i_{ab} T^a_{jk} V^b`.
fn right_mult(c: &Tensor12, t: &Tensor12, v: &VectorField) -> Tensor12 {
    let ch = c.chart();
    let n = ch.dim();
    let m: Vec<RationalExpr> = (0..n * n)
        .map(|ia| {
            sum(
                ch.coords(),
                (0..n).map(|b| &c[[ia / n, ia % n, b]] * &v[[b]]),
            )
        })
        .collect();
    Tensor12::from_fn(ch, |ix| {
        sum(
            ch.coords(),
            (0..n).map(|a| &m[ix[0] * n + a] * &t[[a, ix[1], ix[2]]]),
        )
    })
}

/// `Lie_{X∘Y}(C) − X ∘ Lie_Y(C) − Lie_X(C) ∘ Y`.
pub fn hm2_defect(c: &Tensor12, x: &VectorField, y: &VectorField) -> Result<Tensor12, GeomError> {
    let xy = mult_apply(c, x, y)?;
    let l_xy = lie_derivative(&xy, c)?;
    let l_y = lie_derivative(y, c)?;
    let l_x = lie_derivative(x, c)?;
    let a = left_mult(c, x, &l_y);
    let b = right_mult(c, &l_x, y);
    l_xy.zip_with(&a, |p, q| p - q)?.zip_with(&b, |p, q| p - q)
}

/// Commutativity, associativity, unity and both Hertling–Manin conditions.
pub fn check_f_manifold(c: &Tensor12, e: &VectorField) -> Result<CheckReport, VerifyError> {
    c.chart().same(e.chart())?;
    let ch = c.chart();
    let n = ch.dim();
    let mut r = CheckReport::new("F-manifold");
    r.axioms.push(AxiomEntry {
        label: "commutativity".into(),
        witness: c
            .symmetry_defect()
            .map(|(indices, expr)| Witness { indices, expr }),
    });
    let assoc = Tensor13::from_fn(ch, |ix| {
        let (a, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        sum(
            ch.coords(),
            (0..n).map(|b| &c[[a, j, b]] * &c[[b, k, l]] - &c[[a, k, b]] * &c[[b, j, l]]),
        )
    });
    r.push("associativity", &assoc);
    let unity = Tensor11::from_fn(ch, |ix| {
        let (i, j) = (ix[0], ix[1]);
        sum(ch.coords(), (0..n).map(|k| &c[[i, j, k]] * &e[[k]])) - ch.kronecker(i, j)
    });
    r.push("unity", &unity);
    r.push("Lie_e(C) = 0", &lie_derivative(e, c)?);
    for p in 0..n {
        for q in 0..n {
            let d = hm2_defect(
                c,
                &VectorField::coordinate(ch, p),
                &VectorField::coordinate(ch, q),
            )?;
            r.push(format!("Hertling-Manin (d_{p}, d_{q})"), &d);
        }
    }
    Ok(r)
}

/// Flatness, covariantly constant unity, invariance of `g`, and symmetry of `∇c`.
pub fn check_frobenius(
    g: &Metric,
    c: &Tensor12,
    e: &VectorField,
) -> Result<CheckReport, VerifyError> {
    g.chart().same(c.chart())?;
    g.chart().same(e.chart())?;
    let ch = g.chart();
    let mut r = CheckReport::new("Frobenius");
    r.push("flat metric", &riemann(g));
    r.push(
        "covariantly constant unity",
        &covariant_derivative_vector(g, e)?,
    );
    let lowered = lower_multiplication(g, c)?;
    let invariance = Tensor03::from_fn(ch, |ix| {
        &lowered[[ix[0], ix[1], ix[2]]] - &lowered[[ix[2], ix[1], ix[0]]]
    });
    r.push("invariant metric", &invariance);
    r.push("symmetric nabla c", &nabla_c_residual(g, &lowered));
    Ok(r)
}

/// `c_{ijk} = g_{ia} C^a_{jk}`.
pub fn lower_multiplication(g: &Metric, c: &Tensor12) -> Result<Tensor03, GeomError> {
    g.chart().same(c.chart())?;
    let ch = g.chart();
    let n = ch.dim();
    Ok(Tensor03::from_fn(ch, |ix| {
        sum(
            ch.coords(),
            (0..n).map(|a| g.lower(ix[0], a) * &c[[a, ix[1], ix[2]]]),
        )
    }))
}
