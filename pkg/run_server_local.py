"""
Serve the verification API locally with auto-reload.

Run `python run_server_local.py`; Swagger UI is at `http://0.0.0.0:8001/docs`.
"""
import uvicorn

if __name__ == "__main__":
    uvicorn.run("api.server:app", host="0.0.0.0", port=8001, reload=True)
