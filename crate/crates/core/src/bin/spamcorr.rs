use std::process::ExitCode;

fn main() -> ExitCode {
    let code = spamcorr::cli::run(std::env::args_os(), &mut |line| println!("{line}"), &mut |line| {
        eprintln!("{line}")
    });
    ExitCode::from(code)
}
