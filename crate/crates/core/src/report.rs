//! Verification records shared by all checks.

use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub witness_dims: Vec<usize>,
    pub counterexample: Option<String>,
}

impl Check {
    pub fn new(id: impl Into<String>, ok: bool, witness_dims: Vec<usize>) -> Self {
        Check {
            id: id.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness_dims,
            counterexample: None,
        }
    }

    pub fn skipped(id: impl Into<String>, reason: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            status: Status::Skipped,
            witness_dims: Vec::new(),
            counterexample: Some(reason.into()),
        }
    }

    pub fn with_counterexample(mut self, c: Option<String>) -> Self {
        if self.status == Status::Fail {
            self.counterexample = c;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self, params: &Value) -> Value {
        let mut v = json!({
            "check_id": self.id,
            "params": params,
            "status": self.status.as_str(),
            "witness_dims": self.witness_dims,
        });
        if let Some(c) = &self.counterexample {
            v["counterexample"] = json!(c);
        }
        v
    }
}

/// True when no check failed (skipped checks do not count as failures).
pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.status != Status::Fail)
}

/// Every check id with the statement it verifies.
pub const CATALOG: &[(&str, &str)] = &[
    (
        "dim.block_sum",
        "dim S^B(n,d) equals the sum over i of dim S^A(ceil(n/2),i) dim S^A(floor(n/2),d-i)",
    ),
    (
        "hecke.relations",
        "quadratic and braid relations of the type B Hecke algebra",
    ),
    ("hecke.jm_commute", "Jucys-Murphy elements commute pairwise"),
    (
        "hecke.central_u",
        "u^+_d and u^-_d are central with T_0 eigenvalues Q^{-1} and -Q",
    ),
    ("hecke.u_vanishing", "u^-_b T_w u^+_a = 0 whenever a + b > d"),
    ("hecke.e_idempotent", "e_{a,b} is idempotent"),
    (
        "hecke.e_right_ideal",
        "e_{a,b} H = v_{a,b} H with e_{a,b} a left identity there",
    ),
    ("hecke.e_commutes_young", "e_{a,b} commutes with H(S_b x S_a)"),
    ("hecke.e_corner", "e_{a,b} H e_{a,b} = e_{a,b} H(S_b x S_a)"),
    (
        "hecke.morita_corners",
        "the corners e_i H e_i are faithful copies of H(S_i x S_{d-i})",
    ),
    (
        "tensor.module_axioms",
        "generator matrices on V^{(x)d} satisfy the Hecke relations",
    ),
    ("tensor.u_on_words", "v_I u^+_d = w^+_I and v_J u^-_d = w^-_J"),
    (
        "tensor.u_image_spans",
        "V^{(x)d} u^+_d and V^{(x)d} u^-_d are spanned by the w^+ and w^- vectors",
    ),
    (
        "tensor.projection_leading",
        "the nonpositive projection of w^+_I or w^-_J is a multiple of v_{-I} or v_{-J}",
    ),
    (
        "tensor.projection_triangular",
        "the nonpositive projection of w^+_I or w^-_J is unitriangular with leading term v_{-I} or v_{-J}",
    ),
    (
        "tensor.w_isomorphism",
        "v_I -> w^+_I and v_J -> w^-_J are Hecke-linear isomorphisms onto V^{(x)d} u^+_d and V^{(x)d} u^-_d",
    ),
    (
        "tensor.v_image_spans",
        "V^{(x)d} v_{a,b} is spanned by (V_{>0}^{(x)b} (x) V_{>=0}^{(x)a}) v_{a,b}",
    ),
    (
        "tensor.shuffle_projection",
        "the split projection of (w^-_J (x) v_I) T_{w_{a,b}} is a multiple of v_I (x) v_{-J}",
    ),
    (
        "tensor.shuffle_triangular",
        "the split projection of (w^-_J (x) v_I) T_{w_{a,b}} is unitriangular",
    ),
    (
        "tensor.v_projection",
        "the split projection of (v_J (x) v_I) v_{a,b} is a multiple of v_{-I} (x) v_{-J}",
    ),
    (
        "tensor.v_triangular",
        "the split projection of (v_J (x) v_I) v_{a,b} is unitriangular",
    ),
    (
        "tensor.block_isomorphism",
        "the block map onto V^{(x)d} v_{a,b} is an isomorphism intertwining T_t for t != a",
    ),
    (
        "schur.centralizer_dimension",
        "the commutant of the type B action on V^{(x)d} has the closed-formula dimension",
    ),
    (
        "schur.centralizer_closure",
        "the commutant basis is closed under multiplication",
    ),
    (
        "schur.phi_dimension",
        "the double coset basis of End_H(+ x_mu H) has the formula dimension",
    ),
    (
        "schur.phi_h_linear",
        "each double coset map commutes with the right Hecke action",
    ),
    (
        "schur.phi_orthogonal",
        "products of double coset maps with mismatched weights vanish",
    ),
    (
        "schur.phi_identity_factor",
        "phi^g phi^1 = phi^g for the identity coset",
    ),
    ("schur.phi_unit", "the weight idempotents sum to the identity"),
    (
        "schur.orbit_identification",
        "x_mu T_d -> v_{word(mu)} T_d identifies the permutation modules with tensor space",
    ),
    (
        "schur.realizations_agree",
        "the double coset algebra and the commutant coincide under the orbit identification",
    ),
    (
        "schur.functor_idempotent",
        "the weight idempotent of omega is idempotent",
    ),
    (
        "schur.functor_corner_dim",
        "the corner at omega has the dimension of the Hecke algebra",
    ),
    (
        "schur.functor_hecke_constants",
        "structure constants of the corner match those of the Hecke algebra under phi^g <-> T_g",
    ),
    (
        "schur.functor_bimodule_dim",
        "the corner bimodule has the expected dimension",
    ),
    ("schur.embed_idempotent", "the rank embedding idempotent is idempotent"),
    (
        "schur.embed_corner_dim",
        "the corner of S^B(n',d) has dimension dim S^B(n,d)",
    ),
    (
        "schur.embed_constants",
        "structure constants of the corner match S^B(n,d)",
    ),
    (
        "schur.iso_commutes",
        "block images commute with the Young subgroup action",
    ),
    ("schur.iso_injective", "the block isomorphism is injective"),
    ("schur.iso_multiplicative", "the block isomorphism is multiplicative"),
    (
        "schur.iso_dimensions",
        "block commutant dimensions match the type A formulas",
    ),
    (
        "schur.iso_rank_two_matching",
        "the images of a* and b* in S^B(2,1) are 1_x + 1_y and -Q^{-1} 1_x + Q 1_y up to swapping",
    ),
    (
        "qcoord.quotient_dimension",
        "the monomial quotient by J^B has the formula dimension",
    ),
    ("qcoord.coideal", "J^B is a coideal"),
    (
        "qcoord.generators_match_definition",
        "the right ideal generated by the four families equals the span forced by T_0",
    ),
    ("qcoord.t0_compatible", "the comodule map commutes with T_0 modulo J^B"),
    ("qcoord.dual_axioms", "the dual product is associative and unital"),
    (
        "qcoord.pairing_onto_centralizer",
        "the pairing embeds the dual algebra onto the commutant",
    ),
    ("qcoord.pairing_multiplicative", "the pairing is multiplicative"),
    ("qcoord.pairing_unit", "the counit pairs to the identity"),
    ("cell.c1_basis", "the cellular family is a basis"),
    (
        "cell.c2_involution",
        "the involution is an anti-automorphism exchanging C_{s,t} and C_{t,s}",
    ),
    (
        "cell.c3_triangular",
        "left multiplication is triangular modulo lower cells",
    ),
    (
        "cell.gram_congruence",
        "C_{s,s} C_{t,t} is a multiple of C_{s,t} modulo lower cells",
    ),
    (
        "cell.gram_factorization",
        "product datum Gram values factor into component values",
    ),
];

pub fn describe(id: &str) -> Option<&'static str> {
    CATALOG.iter().find(|(k, _)| *k == id).map(|(_, v)| *v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_shape() {
        let c = Check::new("x.y", false, vec![2, 3]).with_counterexample(Some("w=[1]".into()));
        let v = c.to_json(&json!({"n": 2}));
        assert_eq!(v["status"], "fail");
        assert_eq!(v["counterexample"], "w=[1]");
        assert_eq!(v["witness_dims"], json!([2, 3]));
        assert!(!all_passed(&[c]));
        assert!(all_passed(&[Check::skipped("z", "too large")]));
    }
}
