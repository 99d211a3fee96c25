use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = porder_cli::run(std::env::args_os());
    match &out.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out.body) {
                eprintln!("cannot write {path}: {e}");
                return ExitCode::from(1);
            }
        }
        None if out.code == 2 => eprint!("{}", out.body),
        None => {
            let _ = std::io::stdout().write_all(out.body.as_bytes());
        }
    }
    ExitCode::from(out.code as u8)
}
