//! A literal transcription of the classification table: one row per
//! feature, columns Imperative, Procedural, OO, Functional.

use paradigm_profiler::{Paradigm, ParadigmSet};

pub const TABLE: &str = "
if else elif                 | x . . .
while loop                   | x . . .
break                        | x . . .
continue                     | x . . .
assert                       | x . . .
del                          | x . . .
array indexing               | x . . .
pass (inside loop)           | x . . .
pass (inside class)          | x . x .
pass (inside def)            | x x . .
return                       | . x . .
function (def)               | . x . .
nested function (def)        | . x . .
class declaration            | . . x .
inheritance                  | . . x .
method (def)                 | . . x .
with                         | x . x .
try                          | x . x .
except                       | x . x .
finally                      | x . x .
raise                        | x . x .
for loop                     | x . . x
(not) in operator            | x . . x
yield                        | x . . x
function-as-arg              | . . . x
lambda functions             | . . . x
list comprehension           | . . . x
decorators                   | . . . x
generator expressions        | . . . x
iterators (__next/iter__())  | x x x x
send() (into generator)      | . x . x
iter()                       | . x . x
map()                        | . x . x
sorted()                     | . x . x
filter()                     | . x . x
any()                        | . x . x
all()                        | . x . x
itertools.*()                | . x . x
functools.*()                | . x . x
enumerate()                  | . x . x
zip()                        | . x . x
";

pub fn transcription() -> Vec<(&'static str, ParadigmSet)> {
    let columns = [Paradigm::Imperative, Paradigm::Procedural, Paradigm::ObjectOriented, Paradigm::Functional];
    TABLE
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let (name, marks) = line.split_once('|').unwrap();
            let set = marks.split_whitespace().zip(columns).filter(|(m, _)| *m == "x").map(|(_, p)| p).collect();
            (name.trim(), set)
        })
        .collect()
}
