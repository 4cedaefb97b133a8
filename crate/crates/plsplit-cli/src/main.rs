fn main() {
    println!("plsplit");
}
