import { TessellateClient } from "./api.js";
import { DesignerApp } from "./app.js";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
const client = new TessellateClient("");
const app = new DesignerApp(root, client);
app.start().catch((err) => {
  root.textContent = `failed to start: ${err}. Is the service running? (curvetile serve)`;
});
