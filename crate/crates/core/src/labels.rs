//! Claim labels and their projections.
//!
//! Class order is fixed everywhere: `NonClaim < ExplicitClaim < ImplicitClaim`
//! for the three-way scheme and `NonClaim < Claim` for the binary one. Ties
//! in prediction are broken toward the lowest index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Three-way document annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    NonClaim,
    #[serde(rename = "explicit")]
    ExplicitClaim,
    #[serde(rename = "implicit")]
    ImplicitClaim,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::NonClaim, Label::ExplicitClaim, Label::ImplicitClaim];

    pub fn binary(self) -> BinaryLabel {
        match self {
            Label::NonClaim => BinaryLabel::NonClaim,
            Label::ExplicitClaim | Label::ImplicitClaim => BinaryLabel::Claim,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::NonClaim => "non_claim",
            Label::ExplicitClaim => "explicit",
            Label::ImplicitClaim => "implicit",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "non_claim" => Ok(Label::NonClaim),
            "explicit" => Ok(Label::ExplicitClaim),
            "implicit" => Ok(Label::ImplicitClaim),
            other => Err(Error::invalid(format!("unknown label `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinaryLabel {
    NonClaim,
    Claim,
}

impl BinaryLabel {
    pub const ALL: [BinaryLabel; 2] = [BinaryLabel::NonClaim, BinaryLabel::Claim];
}

/// Label as it appears in task inputs and prediction sets.
///
/// Tweets carry the three-way labels, essay paragraphs only `Claim` /
/// `NonClaim`. A prediction set uses either the binary subset or the
/// three-way subset, never a mix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskLabel {
    NonClaim,
    Claim,
    ExplicitClaim,
    ImplicitClaim,
}

impl TaskLabel {
    pub fn to_binary(self) -> TaskLabel {
        match self {
            TaskLabel::NonClaim => TaskLabel::NonClaim,
            _ => TaskLabel::Claim,
        }
    }

    pub fn is_claim(self) -> bool {
        self != TaskLabel::NonClaim
    }

    /// Short name used in reports, mirroring the usual table abbreviations.
    pub fn short_name(self) -> &'static str {
        match self {
            TaskLabel::NonClaim => "n-claim",
            TaskLabel::Claim => "claim",
            TaskLabel::ExplicitClaim => "expl",
            TaskLabel::ImplicitClaim => "impl",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TaskLabel::NonClaim => "non_claim",
            TaskLabel::Claim => "claim",
            TaskLabel::ExplicitClaim => "explicit",
            TaskLabel::ImplicitClaim => "implicit",
        }
    }
}

impl fmt::Display for TaskLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<Label> for TaskLabel {
    fn from(label: Label) -> Self {
        match label {
            Label::NonClaim => TaskLabel::NonClaim,
            Label::ExplicitClaim => TaskLabel::ExplicitClaim,
            Label::ImplicitClaim => TaskLabel::ImplicitClaim,
        }
    }
}

impl From<BinaryLabel> for TaskLabel {
    fn from(label: BinaryLabel) -> Self {
        match label {
            BinaryLabel::NonClaim => TaskLabel::NonClaim,
            BinaryLabel::Claim => TaskLabel::Claim,
        }
    }
}

/// The label set a prediction set lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSpace {
    Binary,
    ThreeWay,
}

impl LabelSpace {
    pub fn classes(self) -> &'static [TaskLabel] {
        match self {
            LabelSpace::Binary => &[TaskLabel::NonClaim, TaskLabel::Claim],
            LabelSpace::ThreeWay => &[
                TaskLabel::NonClaim,
                TaskLabel::ExplicitClaim,
                TaskLabel::ImplicitClaim,
            ],
        }
    }

    pub fn contains(self, label: TaskLabel) -> bool {
        self.classes().contains(&label)
    }
}
