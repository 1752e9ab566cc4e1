use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    match immuno_opt::lab::cli::run_cli(std::env::args_os(), &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("immuno-opt: {e}");
            ExitCode::from(2)
        }
    }
}
