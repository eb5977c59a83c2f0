// Wire types mirroring the game service's JSON bodies, plus the view model.
export function emptyViewModel(serviceUrl) {
    return {
        serviceUrl,
        problem: null,
        problemId: null,
        baseId: null,
        winning: null,
        stats: null,
        session: null,
        badges: new Map(),
        whatIf: new Map(),
        banner: null,
        error: null,
        busy: false,
    };
}
