fn main() {
    std::process::exit(dof_lab::cli::run());
}
