//! The predicate catalog.

use serde::Serialize;

use qradius_core::Result;

use crate::eval::{self, Evaluator};
use crate::inputs::{self, Domain, Inputs, TrialSetup};

/// Shape of the bound being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Upper,
    Lower,
    Sandwich,
    Conditional,
    ExpectedFail,
}

/// Scalar parameters a predicate needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Q,
    T,
    Gamma,
    F,
}

/// Which parameters are swept to form the cases of one trial. The rest are
/// fixed per trial from the cyclic schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// One case per trial.
    None,
    Q,
    /// `q` crossed with the `t` set.
    QT,
    /// `q` crossed with the `t` set used as convex weights.
    QGamma,
}

/// Geometry the predicate lives in; decides which trial schedule applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `A`-weighted operators with a rotating metric.
    Weighted,
    /// Euclidean geometry, sector target from the schedule.
    Sector,
    /// Euclidean geometry with `alpha = 0`.
    Positive,
    /// Matrix mean axioms.
    Axiom,
}

#[derive(Clone, Copy)]
pub struct PredicateDef {
    pub id: &'static str,
    /// The inequality in plain notation.
    pub statement: &'static str,
    pub domain: Domain,
    pub params: &'static [Param],
    pub kind: Kind,
    pub family: Family,
    pub sweep: Sweep,
    pub draw: fn(&TrialSetup) -> Result<Inputs>,
    pub eval: Evaluator,
}

impl std::fmt::Debug for PredicateDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PredicateDef").field("id", &self.id).field("kind", &self.kind).finish()
    }
}

use Param::*;

macro_rules! def {
    ($id:literal, $st:literal, $dom:ident, $params:expr, $kind:ident, $fam:ident, $sweep:ident, $draw:path, $eval:path) => {
        PredicateDef {
            id: $id,
            statement: $st,
            domain: Domain::$dom,
            params: $params,
            kind: Kind::$kind,
            family: Family::$fam,
            sweep: Sweep::$sweep,
            draw: $draw,
            eval: $eval,
        }
    };
}

static PREDICATES: [PredicateDef; 25] = [
    def!("P01", "|q| w_A(T) <= w_qA(T) <= w_A(T) for A-selfadjoint T",
        ASelfadjoint, &[Q], Sandwich, Weighted, Q, inputs::draw_selfadjoint, eval::p01),
    def!("P02", "|q|/2 ||T||_A <= w_qA(T) <= ||T||_A",
        General, &[Q], Sandwich, Weighted, Q, inputs::draw_semi, eval::p02),
    def!("P03", "|q|^2/4 ||T#T + TT#||_A <= w_qA(T)^2 <= (2 - |q|^2 + 4|q|sqrt(1-|q|^2))/2 ||T#T + TT#||_A",
        General, &[Q], Sandwich, Weighted, Q, inputs::draw_semi, eval::p03),
    def!("P04", "if w_qA(T)^2 = |q|^2/4 ||T#T + TT#||_A then |q|^2 ||Re_A(e^{it}T)||_A^2 = |q|^2 ||Im_A(e^{it}T)||_A^2 = |q|^2/4 ||T#T + TT#||_A for all t",
        General, &[Q], Conditional, Weighted, Q, inputs::draw_near_equality, eval::p04),
    def!("P05", "w_qA(T) <= sqrt(|q|^2 w_A(T)^2 + (1-|q|^2) ||T||_A^2 + 2|q|sqrt(1-|q|^2) w_A(T) ||T||_A)",
        General, &[Q], Upper, Weighted, Q, inputs::draw_semi, eval::p05),
    def!("P06", "w_q(T) <= sqrt(|q|^2 w(T)^2 + (1-|q|^2) ||T||^2 + 2|q|sqrt(1-|q|^2) w(T) ||T||)",
        General, &[Q], Upper, Positive, Q, inputs::draw_plain, eval::p05),
    def!("P07", "|q|^2 w_qA(TS) <= 4 w_qA(T) w_qA(S)",
        General, &[Q], Upper, Weighted, Q, inputs::draw_semi_pair, eval::p07),
    def!("P08", "w_q(TS) > 4 w_q(T) w_q(S) for T = [[0,1],[1,0]], S = 2I, q = 0.1",
        FixedDemo, &[], ExpectedFail, Positive, None, inputs::draw_demo, eval::p08),
    def!("P09", "|q| ||Re T|| <= w_q(Re T) <= ||Re T||, and the same for Im T",
        General, &[Q], Sandwich, Positive, Q, inputs::draw_plain, eval::p09),
    def!("P10", "cos(a) ||A|| <= ||Re A|| <= ||A|| for A in S_a",
        Sectorial, &[], Sandwich, Sector, None, inputs::draw_sectorial, eval::p10),
    def!("P11", "f(||Re A||) <= ||Re f(A)|| <= sec^2(a) f(||Re A||)",
        Sectorial, &[F], Sandwich, Sector, None, inputs::draw_sectorial, eval::p11),
    def!("P12", "f(Re A) <= Re f(A) <= sec^2(a) f(Re A) in Loewner order",
        Sectorial, &[F], Sandwich, Sector, None, inputs::draw_sectorial, eval::p12),
    def!("P13", "||f(A+B)|| <= ||f(A) + f(B)|| for positive A, B",
        Psd, &[F], Upper, Positive, None, inputs::draw_psd_pair, eval::p13),
    def!("P14", "cos(a) w_q(A) <= ||Re A|| and |q| cos(a) w_q(A) <= w_q(Re A)",
        Sectorial, &[Q], Lower, Sector, Q, inputs::draw_sectorial, eval::p14),
    def!("P15", "|q|^2 cos(a) f(w_q(A)) <= |q| w_q(f(A)) <= sec^3(a) f(w_q(A))",
        Sectorial, &[Q, F], Sandwich, Sector, Q, inputs::draw_sectorial, eval::p15),
    def!("P16", "|q| w_q((1-g) f(A) + g f(B)) <= sec^3(a) f((1-g) w_q(A) + g w_q(B))",
        Sectorial, &[Q, Gamma, F], Upper, Sector, QGamma, inputs::draw_sectorial_pair, eval::p16),
    def!("P17", "|q| w_q(f(A+B)) <= sec^3(a) w_q(f(A) + f(B))",
        Sectorial, &[Q, F], Upper, Sector, Q, inputs::draw_sectorial_pair, eval::p17),
    def!("P18", "power case f = x^t: |q|^2 cos(a) w_q(A)^t <= |q| w_q(A^t) <= sec^3(a) w_q(A)^t; |q| w_q((1-g)A^t + gB^t) <= sec^3(a) ((1-g) w_q(A) + g w_q(B))^t; |q| w_q((A+B)^t) <= sec^3(a) w_q(A^t + B^t)",
        Sectorial, &[Q, T, Gamma], Sandwich, Sector, QT, inputs::draw_sectorial_pair, eval::p18),
    def!("P19", "|q| w_q(A^t + B^t) <= 2^{1-t} sec^3(a) (w_q(A) + w_q(B))^t and |q| cos^3(a) w_q((A+B)^t) <= w_q(A^t + B^t) <= 2^{1-t} sec^3(a) (w_q(A) + w_q(B))^t / |q|",
        Sectorial, &[Q, T], Sandwich, Sector, QT, inputs::draw_sectorial_pair, eval::p19),
    def!("P20", "positive case: |q|^2 w_q(A)^t <= |q| w_q(A^t) <= w_q(A)^t; |q| w_q((1-g)A^t + gB^t) <= ((1-g) w_q(A) + g w_q(B))^t; |q| w_q((A+B)^t) <= w_q(A^t + B^t)",
        Psd, &[Q, T, Gamma], Sandwich, Positive, QT, inputs::draw_psd_pair, eval::p20),
    def!("P21", "|q| w_q(A s_f B) <= sec^3(a) w_q(C s_f D) for Re A <= Re C, Re B <= Re D",
        DominatedQuadruple, &[Q, F], Upper, Sector, Q, inputs::draw_quadruple, eval::p21),
    def!("P22", "|q|^2 w_q(A s_f B) <= sec^3(a) (w_q(A) s_f w_q(B))",
        Sectorial, &[Q, F], Upper, Sector, Q, inputs::draw_sectorial_pair, eval::p22),
    def!("P23", "|q|^2 w_q(A #_t B) <= sec^3(a) w_q(A)^{1-t} w_q(B)^t; |q|^2 w_q(A !_t B) <= sec^3(a) (w_q(A) !_t w_q(B)); midpoint A # B",
        Sectorial, &[Q, T], Upper, Sector, QT, inputs::draw_sectorial_pair, eval::p23),
    def!("P24", "|q|^2 w_q(L(A,B)) <= sec^3(a) L(w_q(A), w_q(B)) and |q|^2 w_q(H_t(A,B)) <= sec^3(a) H_t(w_q(A), w_q(B))",
        Sectorial, &[Q, T], Upper, Sector, QT, inputs::draw_sectorial_pair, eval::p24),
    def!("P25", "|q|^2 cos^4(a) w_q(A # B) <= |q| w_q(H_t(A,B)) <= sec^4(a) w_q((A+B)/2)",
        Sectorial, &[Q, T], Sandwich, Sector, QT, inputs::draw_sectorial_pair, eval::p25),
];

static AXIOMS: [PredicateDef; 3] = [
    def!("MA1", "A <= C, B <= D implies A s_f B <= C s_f D",
        DominatedQuadruple, &[F], Upper, Axiom, None, inputs::draw_axiom_monotone, eval::axiom_monotone),
    def!("MA2", "K^*(A s_f B)K = (K^*AK) s_f (K^*BK) for invertible K",
        Psd, &[F], Upper, Axiom, None, inputs::draw_axiom_congruence, eval::axiom_congruence),
    def!("MA4", "I s_f I = I",
        Psd, &[F], Upper, Axiom, None, inputs::draw_axiom_identity, eval::axiom_identity),
];

/// The inequality predicates in id order.
pub fn predicates() -> &'static [PredicateDef] {
    &PREDICATES
}

/// The mean axiom checks.
pub fn axioms() -> &'static [PredicateDef] {
    &AXIOMS
}

pub fn lookup(id: &str) -> Option<&'static PredicateDef> {
    PREDICATES.iter().chain(AXIOMS.iter()).find(|d| d.id.eq_ignore_ascii_case(id))
}

/// Members of a named suite.
pub fn suite(name: &str) -> Option<Vec<&'static PredicateDef>> {
    let all = PREDICATES.iter();
    Some(match name {
        "all" => all.collect(),
        "section2" => all.take(8).collect(),
        "section3" => all.skip(8).collect(),
        "means-axioms" => AXIOMS.iter().collect(),
        _ => return None,
    })
}
