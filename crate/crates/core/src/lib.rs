pub mod adversaries;
pub mod channel;
pub mod codecs;
pub mod experiments;
pub mod format;
pub mod oracle;
pub mod outer;
