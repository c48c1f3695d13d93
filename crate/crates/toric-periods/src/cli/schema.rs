//! Payload schemas of the command-line tasks and their conversion to
//! library objects.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::characters::{CharacterJson, KCharacter, MultiplicativeCharacter, NormOneCharacter};
use crate::characters::mult::ImageJson;
use crate::dichotomy::{k_over_base, CharacterData, SplittingData};
use crate::error::{Error, Result};
use crate::etale::{
    ArchComponent, BaseQuadratic, EtaleAlgebra, EtaleSetting, ExtensionKind, HermitianClass, Lambda, QuadKind,
    QuadraticEtale, QuadraticExtension, TraceZeroDelta,
};
use crate::global::Place;
use crate::padic::field::parse_int;
use crate::padic::{ElementJson, FieldDescriptor, LocalField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaleJson {
    pub base: FieldDescriptor,
    pub components: Vec<FieldDescriptor>,
}

/// K = Q_p(sqrt d).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KJson {
    pub d: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SettingJson {
    Local { etale: EtaleJson, k: KJson },
    Archimedean { components: Vec<ArchComponent> },
}

/// A character given by its rotation table; the domain field follows from
/// where the character lives and may be repeated as a check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_field: Option<FieldDescriptor>,
    pub level: u32,
    pub images: Vec<ImageJson>,
}

impl From<CharacterJson> for TableJson {
    fn from(c: CharacterJson) -> Self {
        TableJson { domain_field: Some(c.domain_field), level: c.level, images: c.images }
    }
}

fn same_shape(a: &FieldDescriptor, b: &FieldDescriptor) -> bool {
    a.p == b.p && a.f == b.f && a.eisenstein == b.eisenstein
}

impl TableJson {
    pub fn build(&self, field: &LocalField) -> Result<MultiplicativeCharacter> {
        let own = field.descriptor();
        if let Some(d) = &self.domain_field {
            if !same_shape(d, &own) {
                return Err(Error::FieldMismatch);
            }
        }
        CharacterJson { domain_field: own, level: self.level, images: self.images.clone() }.build(field)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalCharactersJson {
    /// One per component, on L_j (or on F_j when L_j splits).
    pub alphas: Vec<TableJson>,
    /// On K (or on Q_p when K splits).
    pub beta: TableJson,
    /// The splitting character chi_W = chi_1 on K.
    pub mu: TableJson,
    #[serde(default = "one")]
    pub delta_t: String,
}

fn one() -> String {
    "1".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchCharactersJson {
    pub alphas: Vec<i64>,
    pub beta: i64,
    pub chi_w: i64,
    #[serde(default)]
    pub chi_1: Option<i64>,
    pub delta_sign: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CharactersJson {
    Local(LocalCharactersJson),
    Archimedean(ArchCharactersJson),
}

/// Elements of the components of E, or signs of the real components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ElementJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<i32>>,
}

/// Payload of sum-check and epsilon (sign-vector form).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceJson {
    pub setting: SettingJson,
    pub characters: CharactersJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyJson {
    pub setting: SettingJson,
    #[serde(default)]
    pub lambda: Option<LambdaJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdditiveJson {
    pub level: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TateJson {
    pub character: CharacterJson,
    pub additive: AdditiveJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EpsilonJson {
    Tate(TateJson),
    SignVector(InstanceJson),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalDichotomyJson {
    pub setting: SettingJson,
    pub characters: CharactersJson,
    pub lambda: LambdaJson,
    pub v: HermitianClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FindLambdaJson {
    pub d: i64,
    /// Per component: place -> target sign, +1 at unlisted places.
    pub targets: Vec<BTreeMap<Place, i32>>,
}

/// Rebuilds a descriptor at `precision` p-adic digits (times e).
fn field_at(desc: &FieldDescriptor, precision: Option<u32>) -> Result<LocalField> {
    match precision {
        None => desc.build(),
        Some(n) => {
            let e = desc.eisenstein.len().saturating_sub(1).max(1);
            FieldDescriptor { precision: (n as usize * e).to_string(), ..desc.clone() }.build()
        }
    }
}

impl SettingJson {
    pub fn build(&self, precision: Option<u32>) -> Result<EtaleSetting> {
        match self {
            SettingJson::Local { etale, k } => {
                let base = field_at(&etale.base, precision)?;
                let comps = etale.components.iter().map(|c| field_at(c, precision)).collect::<Result<Vec<_>>>()?;
                let k = QuadraticExtension::new(base.p, parse_int(&k.d)?, base.precision)?;
                EtaleSetting::new(EtaleAlgebra::local(&base, comps)?, BaseQuadratic::Local(k))
            }
            SettingJson::Archimedean { components } => {
                EtaleSetting::new(EtaleAlgebra::archimedean(components.clone())?, BaseQuadratic::Complex)
            }
        }
    }

    pub fn from_setting(s: &EtaleSetting) -> Result<Self> {
        match (&s.algebra, &s.k) {
            (EtaleAlgebra::Local { base, components }, BaseQuadratic::Local(k)) => Ok(SettingJson::Local {
                etale: EtaleJson { base: base.descriptor(), components: components.iter().map(|c| c.descriptor()).collect() },
                k: KJson { d: k.d.to_string() },
            }),
            (EtaleAlgebra::Archimedean { components }, BaseQuadratic::Complex) => {
                Ok(SettingJson::Archimedean { components: components.clone() })
            }
            _ => Err(Error::InvalidInput("mixed local and archimedean setting".into())),
        }
    }
}

/// The field carrying a norm-one character of a quadratic algebra.
fn norm_one_domain(quad: &QuadraticEtale) -> &LocalField {
    match &quad.kind {
        QuadKind::Field { l, .. } => l,
        QuadKind::Split { .. } => &quad.over,
    }
}

fn norm_one(table: &TableJson, quad: &QuadraticEtale) -> Result<NormOneCharacter> {
    let chi = table.build(norm_one_domain(quad))?;
    let a = match quad.kind {
        QuadKind::Field { .. } => NormOneCharacter::Field(chi),
        QuadKind::Split { .. } => NormOneCharacter::Split(chi),
    };
    a.validate(quad)?;
    Ok(a)
}

impl CharactersJson {
    pub fn build(&self, setting: &EtaleSetting) -> Result<CharacterData> {
        match (self, &setting.k) {
            (CharactersJson::Local(c), BaseQuadratic::Local(k)) => {
                if c.alphas.len() != setting.quads.len() {
                    return Err(Error::InvalidInput("one alpha per component of E is required".into()));
                }
                let alphas =
                    c.alphas.iter().zip(&setting.quads).map(|(t, q)| norm_one(t, q)).collect::<Result<Vec<_>>>()?;
                let beta = norm_one(&c.beta, &k_over_base(k)?)?;
                let mu = match &k.kind {
                    ExtensionKind::Field { field, .. } => KCharacter::Field(c.mu.build(field)?),
                    ExtensionKind::Split { .. } => KCharacter::Split(c.mu.build(&k.base)?),
                };
                let t = parse_int(&c.delta_t)?;
                if t == 0 {
                    return Err(Error::InvalidInput("delta must be nonzero".into()));
                }
                Ok(CharacterData::Local { alphas, beta, splitting: SplittingData::from_mu(mu), delta: TraceZeroDelta { t } })
            }
            (CharactersJson::Archimedean(c), BaseQuadratic::Complex) => {
                if c.alphas.len() != setting.n() {
                    return Err(Error::InvalidInput("one alpha per component of E is required".into()));
                }
                if c.delta_sign != 1 && c.delta_sign != -1 {
                    return Err(Error::InvalidInput("delta_sign must be +1 or -1".into()));
                }
                Ok(CharacterData::Archimedean {
                    alphas: c.alphas.clone(),
                    beta: c.beta,
                    chi_w: c.chi_w,
                    chi_1: c.chi_1.unwrap_or(c.chi_w),
                    delta_sign: c.delta_sign,
                })
            }
            _ => Err(Error::InvalidInput("characters do not match the kind of setting".into())),
        }
    }

    pub fn from_data(data: &CharacterData) -> Result<Self> {
        match data {
            CharacterData::Local { alphas, beta, splitting, delta } => {
                if splitting.chi_w != splitting.chi_1 {
                    return Err(Error::Unsupported("chi_1 different from chi_W".into()));
                }
                let table = |c: &MultiplicativeCharacter| TableJson::from(c.to_json());
                let mu = match &splitting.chi_w {
                    KCharacter::Field(c) | KCharacter::Split(c) => table(c),
                };
                Ok(CharactersJson::Local(LocalCharactersJson {
                    alphas: alphas.iter().map(|a| table(a.base_change())).collect(),
                    beta: table(beta.base_change()),
                    mu,
                    delta_t: delta.t.to_string(),
                }))
            }
            CharacterData::Archimedean { alphas, beta, chi_w, chi_1, delta_sign } => {
                Ok(CharactersJson::Archimedean(ArchCharactersJson {
                    alphas: alphas.clone(),
                    beta: *beta,
                    chi_w: *chi_w,
                    chi_1: Some(*chi_1),
                    delta_sign: *delta_sign,
                }))
            }
        }
    }
}

impl LambdaJson {
    pub fn build(&self, setting: &EtaleSetting) -> Result<Lambda> {
        match (&self.components, &self.signs, &setting.algebra) {
            (Some(elems), None, EtaleAlgebra::Local { components, .. }) => {
                if elems.len() != components.len() {
                    return Err(Error::InvalidInput("one lambda entry per component is required".into()));
                }
                Ok(Lambda::Local(elems.iter().zip(components).map(|(e, f)| e.build(f)).collect::<Result<_>>()?))
            }
            (None, Some(signs), EtaleAlgebra::Archimedean { components }) => {
                if signs.len() != components.len() || signs.iter().any(|s| *s != 1 && *s != -1) {
                    return Err(Error::InvalidInput("lambda needs one sign +-1 per component".into()));
                }
                Ok(Lambda::Archimedean(signs.clone()))
            }
            _ => Err(Error::InvalidInput("lambda takes components for a local setting, signs at the real place".into())),
        }
    }
}
