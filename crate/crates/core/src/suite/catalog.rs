//! Static catalog of check ids and the displayed identity each one exercises.

use serde::Serialize;

use super::SuiteKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub anchor: &'static str,
}

impl CatalogEntry {
    pub fn suite(&self) -> SuiteKind {
        SuiteKind::of(self.id)
    }
}

/// Every anchor, in the order the identities appear.
pub const ANCHORS: &[&str] = &[
    "deformed numbers/factorials/binomials",
    "the derivative Eq. (r5)",
    "Fock-type realization",
    "Leibniz rule",
    "operators Eq. (Rpqop1)",
    "pair commutator Eq. (Rpqwalg)",
    "its r=s=2 Remark",
    "n-bracket Eq. (Rpqn-bracket)",
    "n-algebra Eq. (RpqWnalg)",
    "GJI Eq. (ShJ)",
    "sub-2n algebra Eq. (Rpqsub2nalg)",
    "sub-2n algebra Eq. (Rpqsub2nalg) and examples",
    "central extension Eqs. (Rpqcsub2nalg)–(RpqcsubW2nalg)",
    "the cocycle conditions",
    "recursive operators Eqs. (Rpqa1)–(Rpqa2), closed form",
    "first commutators under Eq. (Rqa4)",
    "Nambu bracket Eq. (Rpqa7)",
    "3-algebra Eqs. (Rpqa9a–d)",
    "Bremner and Filippov identities",
    "Virasoro–Witt operators and Eqs. (Rpqa14)–(Rpqa15)",
    "multibracket Eqs. (Rpqa28)–(Rpqa31)",
    "4-algebra Eq. (Rpqa32)",
    "vanishing 2s-bracket",
    "partial deformed derivatives",
    "operators Eq. (eq18)",
    "commutator Eq. (eq21)",
    "n-algebra Eq. (eq23)",
    "$\\bar W^r_m$ and Eq. (eq22)",
    "Bell coefficients Eq. (RpqB)",
    "rescaled times $t^a_k$",
    "determinant operators Eq. (diffop) and their product property",
    "constraint operators Eq. (Rpq26) plus the r=2,3,4 Remark",
    "the base relation $\\mathcal D_m = m!\\,\\partial/\\partial t_m$",
    "the recursion for $\\mathcal D_{m_1\\dots m_N}$",
    "toy-model operators Eq. (aRpqa)",
    "integrand expansion",
    "constraints Eq. (qt7)",
    "the r=2,3,4 examples",
    "the q- and (p,q)-specializations throughout the Remarks",
];

const fn entry(id: &'static str, anchor: usize) -> CatalogEntry {
    CatalogEntry {
        id,
        anchor: ANCHORS[anchor],
    }
}

const CATALOG: &[CatalogEntry] = &[
    entry("forced.deformed_numbers", 0),
    entry("conf.derivative", 1),
    entry("forced.fock", 2),
    entry("conf.leibniz", 3),
    entry("forced.associativity", 4),
    entry("conf.pair_commutator", 5),
    entry("conf.pair_commutator_rank2", 6),
    entry("forced.antisymmetry", 7),
    entry("conf.n_algebra", 8),
    entry("forced.jacobi_gji", 9),
    entry("conf.gji_prefactor", 9),
    entry("conf.sub2n", 10),
    entry("conf.sub2n_null", 10),
    entry("conf.sub4_example", 11),
    entry("conf.central_skew", 12),
    entry("conf.central_virasoro", 12),
    entry("conf.central_extended_bracket", 12),
    entry("conf.central_cocycle", 13),
    entry("forced.calw_recursive_closed", 14),
    entry("forced.abelian_rank_one", 14),
    entry("conf.calw_comm_11", 15),
    entry("conf.calw_comm_21", 15),
    entry("conf.calw_comm_22", 15),
    entry("conf.calw_comm_31", 15),
    entry("conf.calw_comm_32", 15),
    entry("conf.calw_comm_33", 15),
    entry("conf.calw_leading", 15),
    entry("forced.nambu_forms", 16),
    entry("conf.l_null_3algebra", 16),
    entry("conf.three_algebra_222", 17),
    entry("conf.three_algebra_221", 17),
    entry("conf.three_algebra_211", 17),
    entry("conf.three_algebra_null", 17),
    entry("conf.bremner", 18),
    entry("conf.filippov_fails", 18),
    entry("conf.virasoro_witt_ff", 19),
    entry("conf.virasoro_witt_fr", 19),
    entry("conf.virasoro_witt_rr", 19),
    entry("conf.vw3_fff", 19),
    entry("conf.vw3_ffr", 19),
    entry("conf.vw3_frr", 19),
    entry("conf.vw3_rrr", 19),
    entry("conf.hat_vw3_fff", 19),
    entry("conf.hat_vw3_ffr", 19),
    entry("conf.hat_vw3_frr", 19),
    entry("conf.hat_vw3_rrr", 19),
    entry("conf.multibracket", 20),
    entry("conf.structure_3bracket", 20),
    entry("conf.structure_4bracket", 20),
    entry("conf.structure_5bracket", 20),
    entry("conf.four_algebra_1111", 21),
    entry("conf.four_algebra_3111", 21),
    entry("conf.four_algebra_3311", 21),
    entry("conf.four_algebra_3331", 21),
    entry("conf.four_algebra_3333", 21),
    entry("conf.multibracket_null", 22),
    entry("forced.partials_commute", 23),
    entry("forced.vbar_symmetric", 24),
    entry("forced.multi_antisymmetry", 24),
    entry("conf.vbar_commutator", 25),
    entry("conf.vbar_abelian", 25),
    entry("conf.vbar_nbracket", 26),
    entry("conf.wbar_from_vbar", 27),
    entry("conf.wbar_commutator", 27),
    entry("forced.bell_recursion", 28),
    entry("forced.rescaled_times", 29),
    entry("conf.det_property", 30),
    entry("conf.wtilde_r2", 31),
    entry("conf.wtilde_r3", 31),
    entry("conf.wtilde_r4", 31),
    entry("conf.multi_index_base", 32),
    entry("conf.multi_index_recursion", 33),
    entry("forced.multi_index_symmetric", 33),
    entry("conf.toy_operators", 34),
    entry("conf.toy_integrand", 35),
    entry("conf.toy_duality", 36),
    entry("conf.toy_duality_origin", 36),
    entry("conf.toy_example_r2", 37),
    entry("conf.toy_example_r3", 37),
    entry("conf.toy_example_r4", 37),
    entry("conf.toy_q_remark", 38),
    entry("conf.toy_pq_remark", 38),
    entry("conf.theta_pq_remark", 38),
];

/// The catalog sorted by id.
pub fn list_checks() -> Vec<CatalogEntry> {
    let mut out = CATALOG.to_vec();
    out.sort_by_key(|e| e.id);
    out
}

pub fn lookup(id: &str) -> Option<CatalogEntry> {
    CATALOG.iter().find(|e| e.id == id).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn ids_are_unique_and_every_anchor_is_used() {
        let ids: BTreeSet<_> = CATALOG.iter().map(|e| e.id).collect();
        assert_eq!(ids.len(), CATALOG.len());
        let used: BTreeSet<_> = CATALOG.iter().map(|e| e.anchor).collect();
        for a in ANCHORS {
            assert!(used.contains(a), "unused anchor {a}");
        }
    }
}
