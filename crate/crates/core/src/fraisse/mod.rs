//! Class specifications and bounded checks of the axioms of Fraïssé-style
//! classes: heredity, joint embedding, amalgamation, finitely many types,
//! plus generic growth and the extension property.

mod axioms;
mod census;
mod checker;
mod complete;
mod generic;
mod models;
mod spec;

use serde::{Deserialize, Serialize};

pub use axioms::{
    check_ap, check_hp, check_jep, default_ap_mode, hp_witness, joint_embedding, ApCertificate, ApFailureWitness, ApMode,
    HpFailure, HpReport, JepFailure, JepReport,
};
pub use census::{type_census, TypeCensus};
pub use checker::Checker;
pub use complete::{find_amalgam, one_point_extensions, Amalgam};
pub use generic::{check_extension_property, grow_generic, Demand, ExtensionReport, GrowthOptions, GrowthReport, GrowthStage};
pub use models::{enumerate_models, CatalogModel, ModelCatalog};
pub use spec::ClassSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}
