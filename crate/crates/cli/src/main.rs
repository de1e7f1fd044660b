use std::process::ExitCode;

fn main() -> ExitCode {
    let code = match fermiswap_cli::parse_args(std::env::args_os()) {
        Ok(cfg) => match fermiswap_cli::run(&cfg) {
            Ok(code) => code,
            Err(e) => e.report(),
        },
        Err(e) => e.report(),
    };
    ExitCode::from(code as u8)
}
