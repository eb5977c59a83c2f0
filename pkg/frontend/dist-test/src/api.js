// Thin fetch client for the game service.  Every verdict the UI shows comes
// from one of these calls; nothing is computed locally.
export class ApiRequestError extends Error {
    status;
    code;
    constructor(status, code, detail) {
        super(detail);
        this.status = status;
        this.code = code;
    }
}
export class ApiClient {
    baseUrl;
    constructor(baseUrl) {
        this.baseUrl = baseUrl;
    }
    async request(method, path, body) {
        const response = await fetch(`${this.baseUrl}${path}`, {
            method,
            headers: { "Content-Type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        if (!response.ok) {
            let code = `HTTP ${response.status}`;
            let detail = response.statusText;
            try {
                const doc = (await response.json());
                if (doc.error)
                    code = doc.error;
                if (doc.detail)
                    detail = doc.detail;
            }
            catch {
                // non-JSON error body; keep the status line
            }
            throw new ApiRequestError(response.status, code, detail);
        }
        return (await response.json());
    }
    postProblem(doc) {
        return this.request("POST", "/problems", doc);
    }
    getProblem(id) {
        return this.request("GET", `/problems/${id}`);
    }
    compile(problemId) {
        return this.request("POST", `/problems/${problemId}/compile`, {});
    }
    createGame(baseId, humanRole) {
        return this.request("POST", "/games", { base_id: baseId, human_role: humanRole });
    }
    getGame(id) {
        return this.request("GET", `/games/${id}`);
    }
    move(id, value) {
        return this.request("POST", `/games/${id}/move`, { value });
    }
    winningMoves(id) {
        return this.request("GET", `/games/${id}/winning-moves`);
    }
    whatIf(id, value) {
        return this.request("POST", `/games/${id}/whatif`, { value });
    }
}
