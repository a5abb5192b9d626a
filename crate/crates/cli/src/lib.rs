//! Library half of the `ranksvm` binary, split out so the model file format
//! and commands can be tested directly.

pub mod args;
pub mod commands;
pub mod error;
pub mod model;

pub use error::{CliError, CliResult};
pub use model::ModelFile;

use args::Command;

pub fn run(command: &Command) -> CliResult<()> {
    match command {
        Command::Train(a) => commands::cmd_train(a),
        Command::Predict(a) => commands::cmd_predict(a),
        Command::Eval(a) => commands::cmd_eval(a),
        Command::Generate(a) => commands::cmd_generate(a),
        Command::Bench(a) => commands::cmd_bench(a),
    }
}
