use alloc::string::String;

/// `(a|b|c)`: the element name of a tuple in a derived table.
pub(crate) fn tuple<'a, I>(parts: I) -> String
where
    I: IntoIterator<Item = &'a str>,
{
    let mut out = String::from("(");
    for (i, p) in parts.into_iter().enumerate() {
        if i > 0 {
            out.push('|');
        }
        out.push_str(p);
    }
    out.push(')');
    out
}

/// `[g|x]`: the name of a globalization class.
pub(crate) fn class(g: &str, x: &str) -> String {
    let mut out = String::from("[");
    out.push_str(g);
    out.push('|');
    out.push_str(x);
    out.push(']');
    out
}
