//! Strongly connected components of an implicit digraph (iterative Tarjan).

/// Component id of every node, numbered in reverse topological order of the
/// condensation (sinks first), plus the component count.
pub fn tarjan<F>(node_count: usize, mut successors: F) -> (Vec<usize>, usize)
where
    F: FnMut(usize, &mut Vec<usize>),
{
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; node_count];
    let mut low = vec![0usize; node_count];
    let mut on_stack = vec![false; node_count];
    let mut comp = vec![UNSEEN; node_count];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0;
    let mut comp_count = 0;

    // frame: node, its successor list, position in that list
    let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    let mut buf = Vec::new();

    for root in 0..node_count {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        buf.clear();
        successors(root, &mut buf);
        frames.push((root, buf.clone(), 0));

        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    buf.clear();
                    successors(w, &mut buf);
                    frames.push((w, buf.clone(), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(parent) = frames.last() {
                let u = parent.0;
                low[u] = low[u].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = comp_count;
                    if w == v {
                        break;
                    }
                }
                comp_count += 1;
            }
        }
    }
    (comp, comp_count)
}
