use snbound_core::casson_gordon::CgError;
use snbound_core::{AlgebraError, CComplexError, Error, LinkingFormError, ObstructionError, SeifertError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Semantic(String),
    #[error("computation limit: {0}")]
    Limit(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Semantic(_) => 3,
            CliError::Limit(_) => 4,
        }
    }

    pub fn semantic(msg: impl Into<String>) -> Self {
        CliError::Semantic(msg.into())
    }
}

fn is_limit(e: &Error) -> bool {
    match e {
        Error::LinkingForm(LinkingFormError::GroupTooLarge { .. }) => true,
        Error::CassonGordon(CgError::LinkingForm(LinkingFormError::GroupTooLarge { .. })) => true,
        Error::Obstruction(o) => matches!(
            o,
            ObstructionError::LinkingForm(LinkingFormError::GroupTooLarge { .. })
                | ObstructionError::CassonGordon(CgError::LinkingForm(LinkingFormError::GroupTooLarge { .. }))
        ),
        _ => false,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if is_limit(&e) {
            CliError::Limit(e.to_string())
        } else {
            CliError::Semantic(e.to_string())
        }
    }
}

macro_rules! via_core_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        })*
    };
}

via_core_error!(
    AlgebraError,
    SeifertError,
    CComplexError,
    LinkingFormError,
    CgError,
    ObstructionError
);
